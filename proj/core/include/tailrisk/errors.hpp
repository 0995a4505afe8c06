#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tailrisk {

enum class ErrorCode {
  ParameterDomain,
  EmptyTruncation,
  EmptyData,
  TiltDomain,
  NoMgf,
  NotRare,
  UnattainableLevel,
  MissingSpan,
  WrongRegime,
  UnsupportedClass,
  Resource,
  InsufficientTailData,
  DegenerateData,
  Convergence,
  Inconclusive,
  BootstrapFailure,
  Config,
  Io,
};

/// Stable snake_case identifier used in machine-readable error reports.
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace tailrisk
