#include "tailrisk/evt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <fmt/format.h>

#include "tailrisk/numeric.hpp"

namespace tailrisk {
namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kXiLo = -0.9;
constexpr double kXiHi = 5.0;
constexpr int kXiGrid = 24;

void check_excesses(std::span<const double> y) {
  require(y.size() >= 10, ErrorCode::InsufficientTailData,
          fmt::format("gpd_fit: need at least 10 excesses, got {}", y.size()));
  for (double v : y) {
    require(std::isfinite(v) && v > 0.0, ErrorCode::ParameterDomain,
            "gpd_fit: excesses must be finite and > 0");
  }
}

GpdParams fit_mom(std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return gpd_from_moments(mean, ss / (n - 1.0));
}

GpdParams fit_pwm(std::span<const double> y) {
  std::vector<double> s(y.begin(), y.end());
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  const double nn = static_cast<double>(n);
  double a0 = 0.0, a1 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a0 += s[i];
    // ascending rank i+1 carries weight (N - (i+1))/(N - 1)
    a1 += s[i] * (nn - static_cast<double>(i + 1)) / (nn - 1.0);
  }
  return gpd_from_pwm(a0 / nn, a1 / nn);
}

struct Profile {
  double log_scale;
  double value;
};

/// Maximizes the likelihood over log σ for fixed ξ.
Profile profile_scale(std::span<const double> y, double xi, double ymax, double mean) {
  double lo = std::log(mean) - 12.0;
  if (xi < 0.0) lo = std::max(lo, std::log(-xi * ymax) + 1e-12);
  const double hi = std::log(mean) + 12.0;
  const auto best = numeric::golden_max(
      [&](double ls) { return gpd_log_likelihood(y, {xi, std::exp(ls)}); }, lo, hi, 1e-9, 200);
  return {best.x, best.value};
}
}  // namespace

std::string_view to_string(GpdMethod m) noexcept {
  switch (m) {
    case GpdMethod::Mle: return "mle";
    case GpdMethod::Mom: return "mom";
    case GpdMethod::Pwm: return "pwm";
  }
  return "unknown";
}

GpdMethod gpd_method_from_string(std::string_view name) {
  if (name == "mle" || name == "MLE") return GpdMethod::Mle;
  if (name == "mom" || name == "MOM") return GpdMethod::Mom;
  if (name == "pwm" || name == "PWM") return GpdMethod::Pwm;
  fail(ErrorCode::Config, "unknown GPD fit method '" + std::string(name) + "'");
}

double gpd_log_likelihood(std::span<const double> excesses, const GpdParams& g) {
  if (!(g.scale > 0.0)) return kNegInf;
  const double inv_scale = 1.0 / g.scale;
  const double log_scale = std::log(g.scale);
  double total = 0.0;
  if (std::abs(g.shape) < kGpdShapeZero) {
    for (double y : excesses) total += -log_scale - y * inv_scale;
    return total;
  }
  const double c = 1.0 + 1.0 / g.shape;
  for (double y : excesses) {
    const double z = g.shape * y * inv_scale;
    if (!(z > -1.0)) return kNegInf;
    total += -log_scale - c * std::log1p(z);
  }
  return total;
}

GpdParams gpd_from_moments(double mean, double variance) {
  require(variance > 0.0 && std::isfinite(variance), ErrorCode::DegenerateData,
          "gpd_fit: zero sample variance");
  require(mean > 0.0, ErrorCode::DegenerateData, "gpd_fit: nonpositive mean excess");
  const double r = mean * mean / variance;
  return {0.5 * (1.0 - r), 0.5 * mean * (r + 1.0)};
}

GpdParams gpd_from_pwm(double a0, double a1) {
  const double d = a0 - 2.0 * a1;
  require(d > 0.0 && a1 > 0.0, ErrorCode::DegenerateData,
          "gpd_fit: degenerate probability-weighted moments");
  return {2.0 - a0 / d, 2.0 * a0 * a1 / d};
}

GpdFit gpd_fit(std::span<const double> excesses, GpdMethod method, double threshold) {
  check_excesses(excesses);
  GpdFit fit;
  fit.method = method;
  fit.n_excesses = excesses.size();
  fit.threshold = threshold;
  if (method == GpdMethod::Mom) {
    const GpdParams p = fit_mom(excesses);
    fit.shape = p.shape;
    fit.scale = p.scale;
    return fit;
  }
  const GpdParams pwm = fit_pwm(excesses);
  if (method == GpdMethod::Pwm) {
    fit.shape = pwm.shape;
    fit.scale = pwm.scale;
    return fit;
  }

  const double ymax = *std::max_element(excesses.begin(), excesses.end());
  const double mean = std::accumulate(excesses.begin(), excesses.end(), 0.0) /
                      static_cast<double>(excesses.size());
  auto profile = [&](double xi) { return profile_scale(excesses, xi, ymax, mean); };

  // Coarse scan over ξ (including the PWM start), then golden refinement
  // around the best grid point.
  std::vector<double> grid;
  for (int i = 0; i <= kXiGrid; ++i) grid.push_back(kXiLo + (kXiHi - kXiLo) * i / kXiGrid);
  const double start = std::clamp(pwm.shape, kXiLo, kXiHi);
  grid.insert(std::upper_bound(grid.begin(), grid.end(), start), start);
  std::size_t best_i = 0;
  double best_val = kNegInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = profile(grid[i]).value;
    if (v > best_val) {
      best_val = v;
      best_i = i;
    }
  }
  const double lo = grid[best_i == 0 ? 0 : best_i - 1];
  const double hi = grid[std::min(best_i + 1, grid.size() - 1)];
  const auto refined = numeric::golden_max([&](double xi) { return profile(xi).value; }, lo, hi,
                                           1e-8, 200);
  double xi = refined.x;
  Profile p = profile(xi);
  if (best_val > p.value) {
    xi = grid[best_i];
    p = profile(xi);
  }

  GpdFit best = fit;
  best.shape = pwm.shape;
  best.scale = pwm.scale;
  const double pwm_ll = gpd_log_likelihood(excesses, pwm);
  if (!std::isfinite(p.value) && !std::isfinite(pwm_ll)) {
    throw GpdConvergenceError("gpd_fit: likelihood search found no feasible point", best);
  }
  if (p.value >= pwm_ll) {
    best.shape = xi;
    best.scale = std::exp(p.log_scale);
  }
  return best;
}

// ---------------------------------------------------------------------------

std::string_view to_string(IndexEstimator e) noexcept {
  return e == IndexEstimator::Pickands ? "pickands" : "moment";
}

std::string IndexSeries::to_csv(bool header) const {
  std::string out = header ? "estimator,k,xi_hat\n" : "";
  for (const auto& p : points) {
    if (p.defined) {
      out += fmt::format("{},{},{:.17g}\n", to_string(estimator), p.k, p.xi_hat);
    } else {
      out += fmt::format("{},{},nan\n", to_string(estimator), p.k);
    }
  }
  return out;
}

namespace {
std::vector<double> descending(std::span<const double> data) {
  std::vector<double> s(data.begin(), data.end());
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<std::size_t> sorted_ks(std::span<const std::size_t> k_values) {
  std::vector<std::size_t> ks(k_values.begin(), k_values.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  require(ks.empty() || ks.front() >= 1, ErrorCode::ParameterDomain, "index series: k must be >= 1");
  return ks;
}
}  // namespace

IndexSeries pickands_series(std::span<const double> data, std::span<const std::size_t> k_values) {
  const auto ks = sorted_ks(k_values);
  IndexSeries s{IndexEstimator::Pickands, data.size(), {}};
  if (ks.empty()) return s;
  require(4 * ks.back() <= data.size(), ErrorCode::ParameterDomain,
          "pickands_series: need N >= 4 max(k)");
  const auto x = descending(data);
  for (std::size_t k : ks) {
    const double num = x[k - 1] - x[2 * k - 1];
    const double den = x[2 * k - 1] - x[4 * k - 1];
    if (den > 0.0 && num > 0.0) {
      s.points.push_back({k, std::log(num / den) / std::log(2.0), true});
    } else {
      s.points.push_back({k, kNaN, false});
    }
  }
  return s;
}

IndexSeries moment_series(std::span<const double> data, std::span<const std::size_t> k_values) {
  const auto ks = sorted_ks(k_values);
  IndexSeries s{IndexEstimator::Moment, data.size(), {}};
  if (ks.empty()) return s;
  require(ks.back() + 1 <= data.size(), ErrorCode::ParameterDomain,
          "moment_series: need k + 1 <= N");
  const auto x = descending(data);
  std::vector<double> logs;
  for (std::size_t i = 0; i <= ks.back() && x[i] > 0.0; ++i) logs.push_back(std::log(x[i]));
  for (std::size_t k : ks) {
    if (!(x[k] > 0.0)) continue;
    const double ref = logs[k];
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = logs[i] - ref;
      m1 += d;
      m2 += d * d;
    }
    m1 /= static_cast<double>(k);
    m2 /= static_cast<double>(k);
    const double denom = 1.0 - m1 * m1 / m2;
    if (!(m2 > 0.0) || !(denom > 0.0)) {
      s.points.push_back({k, kNaN, false});
      continue;
    }
    s.points.push_back({k, m1 + 1.0 - 0.5 / denom, true});
  }
  return s;
}

std::vector<std::size_t> k_range(std::size_t lo, std::size_t hi, std::size_t step) {
  require(step >= 1, ErrorCode::ParameterDomain, "k_range: step must be >= 1");
  std::vector<std::size_t> out;
  for (std::size_t k = std::max<std::size_t>(lo, 1); k <= hi; k += step) out.push_back(k);
  return out;
}

KWindow default_k_window(std::size_t sample_size) {
  return {std::max<std::size_t>(1, sample_size / 100), std::max<std::size_t>(1, sample_size / 10)};
}

std::string_view to_string(TailVerdict v) noexcept {
  return v == TailVerdict::HeavyRisk ? "heavy_risk" : "light_safe";
}

TailClassification classify_tail(const IndexSeries& series, std::optional<KWindow> window,
                                  double margin) {
  const KWindow w = window.value_or(default_k_window(series.sample_size));
  std::size_t defined = 0, above = 0;
  for (const auto& p : series.points) {
    if (p.k < w.lo || p.k > w.hi || !p.defined) continue;
    ++defined;
    if (p.xi_hat > margin) ++above;
  }
  if (defined < kMinClassificationPoints) {
    fail(ErrorCode::Inconclusive,
         fmt::format("classify_tail: {} defined points in k window [{}, {}], need {}", defined,
                     w.lo, w.hi, kMinClassificationPoints));
  }
  const double frac = static_cast<double>(above) / static_cast<double>(defined);
  return {2 * above > defined ? TailVerdict::HeavyRisk : TailVerdict::LightSafe, defined, above,
          frac, w, margin};
}

}  // namespace tailrisk
