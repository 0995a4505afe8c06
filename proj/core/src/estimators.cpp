#include "tailrisk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/distributions/spliced.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/parallel.hpp"

namespace tailrisk {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxGrid = 1'000'000;

std::uint64_t stream_id(Estimator e) { return static_cast<std::uint64_t>(e) + 1; }

void check_common(int n, const McOptions& opts) {
  require(n >= 1, ErrorCode::ParameterDomain, "estimator: n must be >= 1");
  require(opts.replications >= 1, ErrorCode::ParameterDomain, "estimator: replications must be >= 1");
}

template <class Fn>
EstimateResult run(Estimator e, const McOptions& opts, double theta, Fn&& replicate) {
  const std::uint64_t id = stream_id(e);
  const RunningStats s = replicate_stats(opts.replications, opts.threads, [&](std::uint64_t j) {
    Rng rng(opts.seed, {id, j});
    return replicate(rng);
  });
  EstimateResult r;
  r.estimate = s.mean;
  r.std_error = s.std_error();
  r.replications = s.count;
  r.estimator = e;
  r.seed = opts.seed;
  r.theta = theta;
  return r;
}
}  // namespace

std::string_view to_string(Estimator e) noexcept {
  switch (e) {
    case Estimator::Crude: return "crude";
    case Estimator::ConditionalMc: return "conditional_mc";
    case Estimator::TiltedIs: return "tilted_is";
  }
  return "unknown";
}

Estimator estimator_from_string(std::string_view name) {
  if (name == "crude") return Estimator::Crude;
  if (name == "conditional_mc") return Estimator::ConditionalMc;
  if (name == "tilted_is") return Estimator::TiltedIs;
  fail(ErrorCode::Config, "unknown estimator '" + std::string(name) + "'");
}

std::string_view to_string(EstimatorChoice c) noexcept {
  switch (c) {
    case EstimatorChoice::Auto: return "auto";
    case EstimatorChoice::Crude: return "crude";
    case EstimatorChoice::ConditionalMc: return "conditional_mc";
    case EstimatorChoice::TiltedIs: return "tilted_is";
  }
  return "unknown";
}

EstimatorChoice estimator_choice_from_string(std::string_view name) {
  if (name == "auto") return EstimatorChoice::Auto;
  switch (estimator_from_string(name)) {
    case Estimator::Crude: return EstimatorChoice::Crude;
    case Estimator::ConditionalMc: return EstimatorChoice::ConditionalMc;
    case Estimator::TiltedIs: return EstimatorChoice::TiltedIs;
  }
  return EstimatorChoice::Auto;
}

nlohmann::json EstimateResult::to_json() const {
  nlohmann::json j = {{"estimate", estimate},
                      {"std_error", std_error},
                      {"replications", replications},
                      {"estimator", std::string(to_string(estimator))},
                      {"seed", seed}};
  if (estimator == Estimator::TiltedIs) j["theta"] = theta;
  return j;
}

// ---------------------------------------------------------------------------

double crude_score(std::span<const double> xs, double gamma) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s > gamma ? 1.0 : 0.0;
}

double ak_score(const Distribution& dist, std::span<const double> head, int n, double gamma) {
  double s = 0.0;
  double m = -kInf;
  for (double x : head) {
    s += x;
    m = std::max(m, x);
  }
  return static_cast<double>(n) * dist.sf(std::max(m, gamma - s));
}

double tilted_score(std::span<const double> xs, double gamma, double theta, double psi) {
  double s = 0.0;
  for (double x : xs) s += x;
  if (!(s > gamma)) return 0.0;
  return std::exp(-theta * s + static_cast<double>(xs.size()) * psi);
}

namespace {
// Small fixed buffer so replicates do not allocate for typical n.
template <class Fn>
double with_draws(const Distribution& dist, int count, Rng& rng, Fn&& fn) {
  constexpr int kStack = 128;
  if (count <= kStack) {
    double buf[kStack];
    for (int i = 0; i < count; ++i) buf[i] = dist.sample(rng);
    return fn(std::span<const double>(buf, static_cast<std::size_t>(count)));
  }
  std::vector<double> v(static_cast<std::size_t>(count));
  for (double& x : v) x = dist.sample(rng);
  return fn(std::span<const double>(v));
}
}  // namespace

double crude_replicate(const Distribution& dist, int n, double gamma, Rng& rng) {
  return with_draws(dist, n, rng, [&](auto xs) { return crude_score(xs, gamma); });
}

double ak_replicate(const Distribution& dist, int n, double gamma, Rng& rng) {
  return with_draws(dist, n - 1, rng, [&](auto xs) { return ak_score(dist, xs, n, gamma); });
}

double tilted_replicate(const Distribution& tilted_law, int n, double gamma, double theta,
                        double psi, Rng& rng) {
  return with_draws(tilted_law, n, rng,
                    [&](auto xs) { return tilted_score(xs, gamma, theta, psi); });
}

EstimateResult crude_mc(const Distribution& dist, int n, double gamma, const McOptions& opts) {
  check_common(n, opts);
  return run(Estimator::Crude, opts, 0.0,
             [&](Rng& rng) { return crude_replicate(dist, n, gamma, rng); });
}

EstimateResult cond_mc_ak(const Distribution& dist, int n, double gamma, const McOptions& opts) {
  check_common(n, opts);
  return run(Estimator::ConditionalMc, opts, 0.0,
             [&](Rng& rng) { return ak_replicate(dist, n, gamma, rng); });
}

EstimateResult is_tilted_mc_at(const Distribution& dist, int n, double gamma, double theta,
                               const McOptions& opts) {
  check_common(n, opts);
  const DistributionPtr law = tilt(dist.ptr(), theta);
  const double psi = dist.log_mgf(theta);
  return run(Estimator::TiltedIs, opts, theta, [&](Rng& rng) {
    return tilted_replicate(*law, n, gamma, theta, psi, rng);
  });
}

EstimateResult is_tilted_mc(const Distribution& dist, int n, double b, const McOptions& opts) {
  check_common(n, opts);
  const TiltSolution s = solve_tilt(dist, b);
  return is_tilted_mc_at(dist, n, static_cast<double>(n) * b, s.theta_star, opts);
}

EstimateResult estimate_tail(const Distribution& dist, int n, double gamma,
                             EstimatorChoice choice, const McOptions& opts) {
  check_common(n, opts);
  const double upper = dist.support().upper;
  if (std::isfinite(upper) && static_cast<double>(n) * upper <= gamma) {
    EstimateResult r;
    r.replications = opts.replications;
    r.seed = opts.seed;
    r.estimator = choice == EstimatorChoice::TiltedIs ? Estimator::TiltedIs
                  : choice == EstimatorChoice::Crude   ? Estimator::Crude
                                                       : Estimator::ConditionalMc;
    if (choice == EstimatorChoice::Auto && dist.tail_class() == TailClass::Light &&
        !dynamic_cast<const SplicedDistribution*>(&dist)) {
      r.estimator = Estimator::TiltedIs;
    }
    return r;
  }
  if (choice == EstimatorChoice::Auto) {
    const bool light = dist.tail_class() == TailClass::Light &&
                       !dynamic_cast<const SplicedDistribution*>(&dist);
    choice = light ? EstimatorChoice::TiltedIs : EstimatorChoice::ConditionalMc;
  }
  switch (choice) {
    case EstimatorChoice::Crude: return crude_mc(dist, n, gamma, opts);
    case EstimatorChoice::ConditionalMc: return cond_mc_ak(dist, n, gamma, opts);
    case EstimatorChoice::TiltedIs: {
      const double b = gamma / static_cast<double>(n);
      if (!(b > dist.mean())) return crude_mc(dist, n, gamma, opts);
      return is_tilted_mc(dist, n, b, opts);
    }
    case EstimatorChoice::Auto: break;
  }
  fail(ErrorCode::Config, "estimate_tail: unresolved estimator");
}

// ---------------------------------------------------------------------------

double exact_convolution(const FiniteLatticeDistribution& dist, int n, double gamma,
                         Inequality inequality) {
  require(n >= 1, ErrorCode::ParameterDomain, "exact_convolution: n must be >= 1");
  const auto masses = dist.masses();
  const std::size_t m = masses.size();
  const std::size_t grid = static_cast<std::size_t>(n) * (m - 1) + 1;
  if (grid > kMaxGrid || (m > 1 && static_cast<std::size_t>(n) > kMaxGrid / (m - 1))) {
    fail(ErrorCode::Resource, "exact_convolution: lattice grid exceeds 10^6 points");
  }
  double total = 0.0;
  for (double w : masses) total += w;
  std::vector<double> base(masses.begin(), masses.end());
  for (double& w : base) w /= total;

  std::vector<double> cur = base;
  std::vector<double> next;
  for (int step = 1; step < n; ++step) {
    next.assign(cur.size() + m - 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (cur[i] == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) next[i + j] += cur[i] * base[j];
    }
    cur.swap(next);
  }
  // S_n = n*origin + spacing*k; compare k with the threshold index.
  const double t = (gamma - static_cast<double>(n) * dist.origin()) / dist.spacing();
  const double tol = 1e-9 * std::max(1.0, std::abs(t));
  double p = 0.0;
  for (std::size_t k = 0; k < cur.size(); ++k) {
    const double kk = static_cast<double>(k);
    const bool equal = std::abs(kk - t) <= tol;
    const bool hit = inequality == Inequality::Strict ? (kk > t && !equal) : (kk > t || equal);
    if (hit) p += cur[k];
  }
  return std::min(1.0, p);
}

double cond_mc_bias_bound(int n, double support_size) {
  require(n >= 1, ErrorCode::ParameterDomain, "cond_mc_bias_bound: n must be >= 1");
  require(support_size >= 1.0, ErrorCode::ParameterDomain, "cond_mc_bias_bound: N must be >= 1");
  if (!std::isfinite(support_size)) return 0.0;
  return -std::expm1(static_cast<double>(n) * std::log1p(-1.0 / support_size));
}

std::optional<double> exact_tail(const Distribution& dist, int n, double gamma) {
  const double nn = static_cast<double>(n);
  const Distribution* d = &dist;
  if (const auto* e = dynamic_cast<const ExponentialDistribution*>(d)) {
    return gamma <= 0.0 ? 1.0 : boost::math::gamma_q(nn, e->rate() * gamma);
  }
  if (const auto* g = dynamic_cast<const GammaDistribution*>(d)) {
    return gamma <= 0.0 ? 1.0 : boost::math::gamma_q(nn * g->shape(), g->rate() * gamma);
  }
  if (const auto* w = dynamic_cast<const WeibullDistribution*>(d); w && w->shape() == 1.0) {
    return gamma <= 0.0 ? 1.0 : boost::math::gamma_q(nn, gamma);
  }
  if (const auto* g = dynamic_cast<const NormalDistribution*>(d)) {
    const double z = (gamma - nn * g->mean()) / std::sqrt(nn * g->variance());
    return 0.5 * boost::math::erfc(z / std::sqrt(2.0));
  }
  if (const auto* lat = dynamic_cast<const FiniteLatticeDistribution*>(d)) {
    return exact_convolution(*lat, n, gamma, Inequality::Strict);
  }
  return std::nullopt;
}

}  // namespace tailrisk
