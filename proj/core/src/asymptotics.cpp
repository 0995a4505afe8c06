#include "tailrisk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/errors.hpp"

namespace tailrisk {
namespace {
constexpr double kResidualTol = 1e-12;
constexpr int kMaxIterations = 300;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Upper end of a bracket [0, hi] with ψ'(hi) > b.
double upper_bracket(const Distribution& dist, double b, double start) {
  const double sup = dist.mgf_domain_sup();
  if (std::isfinite(sup)) {
    // Approach the boundary geometrically.
    for (int k = 1; k <= 60; ++k) {
      const double hi = sup * (1.0 - std::ldexp(1.0, -k));
      if (dist.log_mgf_d1(hi) > b) return hi;
    }
  } else {
    double hi = std::max(1.0, 2.0 * start);
    for (int k = 0; k < 80; ++k, hi *= 2.0) {
      const double d1 = dist.log_mgf_d1(hi);
      if (!std::isfinite(d1)) break;
      if (d1 > b) return hi;
    }
  }
  fail(ErrorCode::UnattainableLevel,
       fmt::format("solve_tilt: no root of psi'(theta) = {} inside the MGF domain", b));
}
}  // namespace

TiltSolution solve_tilt(const Distribution& dist, double b) {
  require(std::isfinite(b), ErrorCode::ParameterDomain, "solve_tilt: b must be finite");
  const double sup = dist.mgf_domain_sup();
  if (!(sup > 0.0)) {
    fail(ErrorCode::NoMgf, "solve_tilt: " + dist.family() + " has no finite MGF for theta > 0");
  }
  const double mu = dist.log_mgf_d1(0.0);
  if (!(b > mu)) {
    fail(ErrorCode::NotRare, fmt::format("solve_tilt: b = {} does not exceed the mean {}", b, mu));
  }
  if (b >= dist.support().upper) {
    fail(ErrorCode::UnattainableLevel,
         fmt::format("solve_tilt: b = {} is not below the support maximum {}", b,
                     dist.support().upper));
  }

  const double v0 = dist.log_mgf_d2(0.0);
  double theta = (b - mu) / v0;
  if (std::isfinite(sup)) theta = std::min(theta, 0.5 * sup);
  if (!(theta > 0.0) || !std::isfinite(theta)) theta = std::isfinite(sup) ? 0.5 * sup : 1.0;

  double lo = 0.0;
  const double hi_init = upper_bracket(dist, b, theta);
  double hi = hi_init;
  theta = std::min(theta, hi);

  TiltSolution s;
  s.b = b;
  for (int it = 1; it <= kMaxIterations; ++it) {
    s.iterations = it;
    const double resid = dist.log_mgf_d1(theta) - b;
    if (resid > 0.0) {
      hi = theta;
    } else {
      lo = theta;
    }
    if (std::abs(resid) <= kResidualTol * std::max(1.0, std::abs(b))) {
      s.converged = true;
      break;
    }
    const double d2 = dist.log_mgf_d2(theta);
    double next = theta - resid / d2;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == theta || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
      s.converged = std::abs(resid) <= 1e-10;
      theta = next;
      break;
    }
    theta = next;
  }
  s.theta_star = theta;
  s.psi_at = dist.log_mgf(theta);
  s.psi2 = dist.log_mgf_d2(theta);
  s.rate = b * theta - s.psi_at;
  if (!s.converged) {
    const double resid = dist.log_mgf_d1(theta) - b;
    s.converged = std::abs(resid) <= 1e-10;
  }
  if (!s.converged) {
    fail(ErrorCode::UnattainableLevel, "solve_tilt: iteration did not reach the tilt equation");
  }
  return s;
}

double lattice_prefactor(double theta, double span, Inequality inequality) {
  const double x = theta * span;
  if (x == 0.0) return 1.0;
  return inequality == Inequality::Strict ? x / std::expm1(x) : x / -std::expm1(-x);
}

double log_light_asymptotic(const Distribution& dist, int n, double b, Inequality inequality,
                            const LatticeOption& lattice) {
  require(n >= 1, ErrorCode::ParameterDomain, "light_asymptotic: n must be >= 1");
  std::optional<double> span;
  if (lattice.lattice) {
    span = lattice.span ? lattice.span : dist.lattice_span();
    if (!span) fail(ErrorCode::MissingSpan, "light_asymptotic: lattice requested without a span");
    require(*span > 0.0, ErrorCode::ParameterDomain, "light_asymptotic: span must be > 0");
  }
  const TiltSolution s = solve_tilt(dist, b);
  const double nn = static_cast<double>(n);
  double log_value = -nn * s.rate -
                     std::log(s.theta_star * std::sqrt(2.0 * std::numbers::pi * nn * s.psi2));
  if (span) log_value += std::log(lattice_prefactor(s.theta_star, *span, inequality));
  return log_value;
}

double light_asymptotic(const Distribution& dist, int n, double b, Inequality inequality,
                        const LatticeOption& lattice) {
  return std::exp(log_light_asymptotic(dist, n, b, inequality, lattice));
}

double one_big_jump(const Distribution& dist, int n, double gamma) {
  return static_cast<double>(n) * dist.sf(gamma - static_cast<double>(n - 1) * dist.mean());
}

double heavy_asymptotic(const Distribution& dist, int n, double gamma) {
  require(n >= 1, ErrorCode::ParameterDomain, "heavy_asymptotic: n must be >= 1");
  if (dist.tail_class() != TailClass::Heavy) {
    fail(ErrorCode::WrongRegime,
         "heavy_asymptotic: " + dist.family() + " is light-tailed; use light_asymptotic");
  }
  const double mu = dist.mean();
  if (!std::isfinite(mu)) fail(ErrorCode::WrongRegime, "heavy_asymptotic: infinite mean");
  if (!(gamma > static_cast<double>(n) * mu)) {
    fail(ErrorCode::NotRare, "heavy_asymptotic: gamma must exceed n * mean");
  }
  return one_big_jump(dist, n, gamma);
}

double level_for_probability(const Distribution& dist, int n, double p) {
  require(p > 0.0 && p < 1.0, ErrorCode::ParameterDomain, "target probability must lie in (0, 1)");
  require(n >= 1, ErrorCode::ParameterDomain, "n must be >= 1");
  const double nn = static_cast<double>(n);
  const double mu = dist.mean();
  if (dist.tail_class() == TailClass::Heavy) {
    require(std::isfinite(mu), ErrorCode::WrongRegime, "level_for_probability: infinite mean");
    return (dist.isf(p / nn) + (nn - 1.0) * mu) / nn;
  }
  LatticeOption lattice;
  if (dist.lattice_span()) lattice.lattice = true;
  const double target = std::log(p);
  auto f = [&](double b) { return log_light_asymptotic(dist, n, b, Inequality::Strict, lattice); };
  const double upper = dist.support().upper;
  const double sd = std::sqrt(dist.variance());
  double lo = mu + 1e-9 * std::max(1.0, sd);
  double hi = mu + sd;
  if (std::isfinite(upper)) hi = std::min(hi, 0.5 * (mu + upper));
  while (f(hi) > target) {
    lo = hi;
    hi = std::isfinite(upper) ? 0.5 * (hi + upper) : mu + 2.0 * (hi - mu);
    if (std::isfinite(upper) && upper - hi < 1e-12 * std::max(1.0, std::abs(upper))) {
      fail(ErrorCode::UnattainableLevel, "level_for_probability: target below the support range");
    }
  }
  for (int i = 0; i < 200 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------

std::string rule_name(const TruncationRule& r) {
  return std::visit(Overloaded{[](const rule::NormalTail&) { return std::string("normal"); },
                               [](const rule::ExponentialTail&) { return std::string("exponential"); },
                               [](const rule::GammaTail&) { return std::string("gamma"); },
                               [](const rule::ExponentialDecay&) {
                                 return std::string("exponential_decay");
                               },
                               [](const rule::PowerLaw&) { return std::string("power_law"); }},
                    r);
}

TruncationRule truncation_rule_for(const Distribution& dist) {
  const Distribution* d = &dist;
  if (dynamic_cast<const NormalDistribution*>(d) || dynamic_cast<const HalfNormalDistribution*>(d)) {
    return rule::NormalTail{};
  }
  if (dynamic_cast<const ExponentialDistribution*>(d)) return rule::ExponentialTail{};
  if (const auto* g = dynamic_cast<const GammaDistribution*>(d)) return rule::GammaTail{g->shape()};
  if (const auto* w = dynamic_cast<const WeibullDistribution*>(d)) {
    if (w->shape() > 1.0) return rule::NormalTail{};
    if (w->shape() == 1.0) return rule::ExponentialTail{};
  }
  if (dist.regularly_varying()) return rule::PowerLaw{};
  fail(ErrorCode::UnsupportedClass,
       "reliable_truncation_level: no truncation rule for " + dist.family());
}

double reliable_truncation_level(const TruncationRule& r, const Distribution& dist, int n,
                                 double b, const TruncationLevelOptions& options) {
  require(n >= 2, ErrorCode::ParameterDomain, "reliable_truncation_level: n must be >= 2");
  const double mu = dist.mean();
  if (!(b > mu)) fail(ErrorCode::NotRare, "reliable_truncation_level: b must exceed the mean");
  const double log_n = std::log(static_cast<double>(n));
  return std::visit(
      Overloaded{
          [&](const rule::NormalTail& t) { return options.safety * t.c0 * log_n; },
          [&](const rule::ExponentialTail&) { return options.safety * b * log_n; },
          [&](const rule::GammaTail& t) {
            require(t.shape > 0.0, ErrorCode::ParameterDomain, "gamma rule: shape must be > 0");
            return options.safety * (b / t.shape) * log_n;
          },
          [&](const rule::ExponentialDecay& t) {
            const double theta = solve_tilt(dist, b).theta_star;
            if (!(theta < t.decay_rate)) {
              fail(ErrorCode::UnsupportedClass,
                   "exponential-decay rule needs theta* below the decay rate");
            }
            return options.safety * log_n / (t.decay_rate - theta);
          },
          [&](const rule::PowerLaw& t) {
            require(t.beta > 1.0, ErrorCode::ParameterDomain, "power-law rule: beta must be > 1");
            return std::pow(static_cast<double>(n) * (b - mu), t.beta);
          }},
      r);
}

double reliable_truncation_level(const Distribution& dist, int n, double b,
                                 const TruncationLevelOptions& options) {
  return reliable_truncation_level(truncation_rule_for(dist), dist, n, b, options);
}

double unreliable_truncation_bound(double mean, int n, double b, double m_bar) {
  require(n >= 2, ErrorCode::ParameterDomain, "unreliable_truncation_bound: n must be >= 2");
  require(m_bar > 0.0, ErrorCode::ParameterDomain, "unreliable_truncation_bound: M must be > 0");
  const double nn = static_cast<double>(n);
  return mean + m_bar * nn * (b - mean) / std::sqrt(std::log(nn));
}

// ---------------------------------------------------------------------------

std::string regime_name(const SampleSizeRegime& r) {
  return std::visit(
      Overloaded{[](const regime::HeavyPowerLaw&) { return std::string("heavy_power_law"); },
                 [](const regime::ExponentialLike&) { return std::string("exponential_like"); },
                 [](const regime::NormalLike&) { return std::string("normal_like"); }},
      r);
}

SampleSize min_sample_size(const SampleSizeRegime& r, int n, double b, double mean,
                           std::optional<double> target_p) {
  require(n >= 1, ErrorCode::ParameterDomain, "min_sample_size: n must be >= 1");
  if (target_p) {
    require(*target_p > 0.0 && *target_p < 1.0, ErrorCode::ParameterDomain,
            "min_sample_size: target_p must lie in (0, 1)");
  }
  const double nn = static_cast<double>(n);
  const double log_n = std::log(nn);
  // Every row is base^exponent.
  double base = nn;
  double exponent = 0.0;
  std::string formula;
  std::visit(
      Overloaded{
          [&](const regime::HeavyPowerLaw& h) {
            require(h.alpha > 2.0, ErrorCode::ParameterDomain, "heavy regime: alpha must be > 2");
            require(h.beta > 1.0, ErrorCode::ParameterDomain, "heavy regime: beta must be > 1");
            if (target_p) {
              base = nn / *target_p;
              exponent = h.beta;
              formula = "n^beta / p^beta";
            } else {
              require(b > mean, ErrorCode::NotRare, "heavy regime: b must exceed the mean");
              base = nn * (b - mean);
              exponent = h.alpha * h.beta;
              formula = "(n(b-mu))^(alpha*beta)";
            }
          },
          [&](const regime::ExponentialLike& e) {
            require(e.rate > 0.0, ErrorCode::ParameterDomain, "exponential regime: rate must be > 0");
            if (target_p) {
              exponent = 1.0 + std::sqrt(-2.0 * std::log(*target_p) / nn);
              formula = "n^(1+sqrt(-2 log(p)/n))";
            } else {
              exponent = e.rate * b;
              formula = "n^(lambda*b)";
            }
          },
          [&](const regime::NormalLike& g) {
            require(g.variance > 0.0, ErrorCode::ParameterDomain, "normal regime: variance must be > 0");
            require(g.c > 0.0, ErrorCode::ParameterDomain, "normal regime: c must be > 0");
            if (target_p) {
              require(b > mean, ErrorCode::NotRare, "normal regime: b must exceed the mean");
              exponent = -g.c * g.c * std::log(*target_p) * log_n / ((b - mean) * (b - mean) * nn);
              formula = "n^(-c^2 log(p) log(n) / ((b-mu)^2 n))";
            } else {
              exponent = g.c * g.c / (2.0 * g.variance) * log_n;
              formula = "n^(c^2/(2 sigma^2) log n)";
            }
          }},
      r);
  const double value = std::pow(base, exponent);
  const double log10_value = exponent * std::log10(base);
  return {value, log10_value, formula};
}

}  // namespace tailrisk
