#include "tailrisk/errors.hpp"

namespace tailrisk {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ParameterDomain: return "parameter_domain";
    case ErrorCode::EmptyTruncation: return "empty_truncation";
    case ErrorCode::EmptyData: return "empty_data";
    case ErrorCode::TiltDomain: return "tilt_domain";
    case ErrorCode::NoMgf: return "no_mgf";
    case ErrorCode::NotRare: return "not_rare";
    case ErrorCode::UnattainableLevel: return "unattainable_level";
    case ErrorCode::MissingSpan: return "missing_span";
    case ErrorCode::WrongRegime: return "wrong_regime";
    case ErrorCode::UnsupportedClass: return "unsupported_class";
    case ErrorCode::Resource: return "resource";
    case ErrorCode::InsufficientTailData: return "insufficient_tail_data";
    case ErrorCode::DegenerateData: return "degenerate_data";
    case ErrorCode::Convergence: return "convergence";
    case ErrorCode::Inconclusive: return "inconclusive";
    case ErrorCode::BootstrapFailure: return "bootstrap_failure";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace tailrisk
