#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tailrisk/distributions/distribution.hpp"
#include "tailrisk/estimators.hpp"
#include "tailrisk/evt.hpp"

namespace tailrisk {

/// Estimator run on each resample. 10^5 replicates is the documented default.
struct InnerEstimator {
  EstimatorChoice choice = EstimatorChoice::Auto;
  std::uint64_t replications = 100000;
};

struct CiMethod {
  enum class Kind { Nonparametric, GpdSpliced };
  Kind kind = Kind::Nonparametric;
  GpdMethod fit = GpdMethod::Mle;  // GpdSpliced only
  double tail_quantile = 0.0;      // GpdSpliced only

  std::string label() const;
  nlohmann::json to_json() const;
};

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::vector<double> resample_estimates;  // successful resamples, in resample order
  std::size_t failures = 0;
  CiMethod method;

  bool contains(double p) const { return lower <= p && p <= upper; }
  double width() const { return upper - lower; }
  nlohmann::json to_json() const;
};

/// Percentile interval: order statistics at positions ceil(B α/2) and
/// ceil(B (1 - α/2)) (1-based, clamped to [1, B]) with α = 1 - level.
/// Products within 1e-9 of an integer round to it before the ceiling.
ConfidenceInterval percentile_interval(std::vector<double> estimates, double level);

struct BootstrapOptions {
  std::size_t resamples = 100;
  double level = 0.95;
  InnerEstimator inner;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Resample r draws its indices from Rng(seed, {1, r}) and runs the inner
/// estimator with seed derive_seed(seed, {2, r}). Failed resamples are
/// skipped and counted; more than 20% failures throws BootstrapFailure.
ConfidenceInterval nonparam_bootstrap_ci(std::span<const double> data, int n, double gamma,
                                         const BootstrapOptions& opts);

/// As above, but each resample becomes splice(resample, q, gpd_fit(excesses)).
ConfidenceInterval gpd_bootstrap_ci(std::span<const double> data, int n, double gamma,
                                    double tail_quantile, GpdMethod fit,
                                    const BootstrapOptions& opts);

inline constexpr double kMaxBootstrapFailureRate = 0.2;

// ---------------------------------------------------------------------------

/// Builds an interval from one data set; seed is the replication's CI seed.
using CiProcedure =
    std::function<ConfidenceInterval(std::span<const double> data, std::uint64_t seed)>;

struct CoverageOptions {
  std::size_t data_size = 100;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct CoverageReport {
  std::size_t replications = 0;
  std::size_t failed_replications = 0;
  double coverage = 0.0;
  double mean_width = 0.0;
  std::vector<double> width_over_p;
  std::vector<ConfidenceInterval> intervals;
  double true_p = 0.0;
  nlohmann::json config;

  nlohmann::json to_json() const;
  static std::string csv_header();
  /// Columns: tail_qtl, method, sample_size, coverage, ci_width.
  std::string csv_row(const CiMethod& method, std::size_t sample_size) const;
};

/// Replication i draws data_size points from truth with Rng(seed, {3, i}) and
/// calls the procedure with derive_seed(seed, {4, i}). Replications whose
/// procedure throws are counted as failed and excluded from the statistics.
CoverageReport coverage_study(const Distribution& truth, double true_p,
                              const CoverageOptions& opts, const CiProcedure& procedure,
                              nlohmann::json config = nlohmann::json::object());

}  // namespace tailrisk
