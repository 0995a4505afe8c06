#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tailrisk/errors.hpp"
#include "tailrisk/gpd.hpp"

namespace tailrisk {

enum class GpdMethod { Mle, Mom, Pwm };

std::string_view to_string(GpdMethod m) noexcept;
GpdMethod gpd_method_from_string(std::string_view name);

struct GpdFit {
  double shape = 0.0;
  double scale = 1.0;
  GpdMethod method = GpdMethod::Pwm;
  std::size_t n_excesses = 0;
  double threshold = 0.0;

  GpdParams params() const { return {shape, scale}; }
};

/// Thrown when the likelihood search fails; best() is the best point seen.
class GpdConvergenceError : public Error {
 public:
  GpdConvergenceError(const std::string& what, GpdFit best)
      : Error(ErrorCode::Convergence, what), best_(best) {}
  const GpdFit& best() const noexcept { return best_; }

 private:
  GpdFit best_;
};

/// Sum of GPD log densities; -inf when a point lies outside the support.
double gpd_log_likelihood(std::span<const double> excesses, const GpdParams& g);

/// Moment inversion: ξ = (1 - m²/v)/2, σ = m(m²/v + 1)/2.
GpdParams gpd_from_moments(double mean, double variance);
/// PWM inversion from a0 = E[X] and a1 = E[X(1 - F(X))]:
/// ξ = 2 - a0/(a0 - 2a1), σ = 2 a0 a1/(a0 - 2a1).
GpdParams gpd_from_pwm(double a0, double a1);

/// Fits excesses (at least 10, all > 0). MLE profiles ξ over [-0.9, 5] with a
/// golden-section search on log σ for each ξ, starting from the PWM fit, and
/// never returns a point with lower likelihood than PWM.
GpdFit gpd_fit(std::span<const double> excesses, GpdMethod method, double threshold = 0.0);

// ---------------------------------------------------------------------------

enum class IndexEstimator { Pickands, Moment };

std::string_view to_string(IndexEstimator e) noexcept;

struct IndexPoint {
  std::size_t k;
  double xi_hat;  // NaN when undefined
  bool defined;
};

struct IndexSeries {
  IndexEstimator estimator = IndexEstimator::Moment;
  std::size_t sample_size = 0;
  std::vector<IndexPoint> points;

  /// Rows "estimator,k,xi_hat"; undefined points are written as "nan".
  std::string to_csv(bool header = true) const;
};

/// ξ_k = log((X(k) - X(2k))/(X(2k) - X(4k)))/log 2 over descending order
/// statistics. Requires 4 max(k) <= N.
IndexSeries pickands_series(std::span<const double> data, std::span<const std::size_t> k_values);

/// Moment estimator M1 + 1 - (1 - M1²/M2)^{-1}/2 over log-excesses of the top
/// k order statistics above X(k+1). k with X(k+1) <= 0 is omitted.
IndexSeries moment_series(std::span<const double> data, std::span<const std::size_t> k_values);

/// k = lo, lo + step, ..., <= hi.
std::vector<std::size_t> k_range(std::size_t lo, std::size_t hi, std::size_t step = 1);

struct KWindow {
  std::size_t lo;
  std::size_t hi;
};

/// [N/100, N/10]
KWindow default_k_window(std::size_t sample_size);

enum class TailVerdict { HeavyRisk, LightSafe };

std::string_view to_string(TailVerdict v) noexcept;

struct TailClassification {
  TailVerdict verdict;
  std::size_t defined_points;
  std::size_t above_margin;
  double fraction_above;
  KWindow window;
  double margin;
};

inline constexpr double kDefaultTailMargin = 0.05;
inline constexpr std::size_t kMinClassificationPoints = 10;

/// HeavyRisk iff strictly more than half of the defined ξ_k with k in the
/// window exceed the margin. Throws Inconclusive with fewer than 10 points.
TailClassification classify_tail(const IndexSeries& series, std::optional<KWindow> window = {},
                                  double margin = kDefaultTailMargin);

}  // namespace tailrisk
