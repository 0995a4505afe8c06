#pragma once

#include <optional>
#include <string>
#include <variant>

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk {

/// Root of ψ'(θ) = b with the derived large-deviations quantities.
struct TiltSolution {
  double theta_star = 0.0;
  double rate = 0.0;    // I = bθ* - ψ(θ*)
  double psi2 = 0.0;    // ψ''(θ*)
  double psi_at = 0.0;  // ψ(θ*)
  double b = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Newton on ψ'(θ) = b started at min(sup/2, (b - μ)/ψ''(0)), with bisection
/// whenever a step leaves the current bracket.
/// Throws NoMgf (heavy tail), NotRare (b <= mean) or UnattainableLevel.
TiltSolution solve_tilt(const Distribution& dist, double b);

enum class Inequality { Strict, NonStrict };

/// Lattice prefactor multiplying the non-lattice asymptotic:
/// θh e^{-θh}/(1 - e^{-θh}) for P(S_n > nb), θh/(1 - e^{-θh}) for P(S_n >= nb).
double lattice_prefactor(double theta, double span, Inequality inequality);

struct LatticeOption {
  /// Treat the law as lattice. When span is empty the law's own span is used.
  bool lattice = false;
  std::optional<double> span;
};

/// e^{-nI} / (θ* sqrt(2π n ψ''(θ*))) times the lattice prefactor, in log form.
double log_light_asymptotic(const Distribution& dist, int n, double b,
                            Inequality inequality = Inequality::Strict,
                            const LatticeOption& lattice = {});
double light_asymptotic(const Distribution& dist, int n, double b,
                        Inequality inequality = Inequality::Strict,
                        const LatticeOption& lattice = {});

/// n * sf(γ - (n-1)μ) for laws without a finite MGF on θ > 0.
/// Throws WrongRegime on light tails or an infinite mean, NotRare if γ <= nμ.
double heavy_asymptotic(const Distribution& dist, int n, double gamma);

/// The same one-big-jump expression without the regime checks.
double one_big_jump(const Distribution& dist, int n, double gamma);

/// Level b with asymptotic tail probability p for P(S_n > nb): closed form
/// isf(p/n) for heavy tails, bisection on the light asymptotic otherwise.
double level_for_probability(const Distribution& dist, int n, double p);

// ---------------------------------------------------------------------------
// Truncation levels

namespace rule {
/// Gaussian tails: any c > 0 works; c0 is the floor used in place of "any".
struct NormalTail {
  double c0 = 1.0;
};
/// Exponential(λ): c > b.
struct ExponentialTail {};
/// Gamma(α, β): c > b/α.
struct GammaTail {
  double shape;
};
/// Density O(e^{-λx}) with θ* < λ: c > 1/(λ - θ*).
struct ExponentialDecay {
  double decay_rate;
};
/// Regularly varying tail: u = (n(b - μ))^β.
struct PowerLaw {
  double beta = 1.5;
};
}  // namespace rule

using TruncationRule = std::variant<rule::NormalTail, rule::ExponentialTail, rule::GammaTail,
                                    rule::ExponentialDecay, rule::PowerLaw>;

std::string rule_name(const TruncationRule& r);

/// Rule matching a distribution family. Normal, half-normal and Weibull with
/// k > 1 use NormalTail; exponential (and Weibull k = 1) ExponentialTail;
/// gamma GammaTail; GPD and half-t PowerLaw. Anything else: UnsupportedClass.
TruncationRule truncation_rule_for(const Distribution& dist);

struct TruncationLevelOptions {
  double safety = 1.1;
};

/// Smallest admissible level under the rule: safety * c_min * log n for light
/// rules, (n(b - μ))^β for PowerLaw. Requires n >= 2 and b > mean.
double reliable_truncation_level(const TruncationRule& r, const Distribution& dist, int n,
                                 double b, const TruncationLevelOptions& options = {});
double reliable_truncation_level(const Distribution& dist, int n, double b,
                                 const TruncationLevelOptions& options = {});

/// Order-level bound below which truncation is unreliable for heavy tails:
/// μ + M̄ n(b - μ)/sqrt(log n).
double unreliable_truncation_bound(double mean, int n, double b, double m_bar = 1.0);

// ---------------------------------------------------------------------------
// Sample sizes

namespace regime {
struct HeavyPowerLaw {
  double alpha;
  double beta = 1.5;
};
struct ExponentialLike {
  double rate;
};
struct NormalLike {
  double variance;
  double c = 1.0;
};
}  // namespace regime

using SampleSizeRegime =
    std::variant<regime::HeavyPowerLaw, regime::ExponentialLike, regime::NormalLike>;

std::string regime_name(const SampleSizeRegime& r);

struct SampleSize {
  double value;       // may be +inf when it overflows a double
  double log10_value;
  std::string formula;
};

/// Order-of-magnitude minimum data size:
///   heavy        (n(b-μ))^{αβ}            or n^β / p^β
///   exponential  n^{λb}                   or n^{1 + sqrt(-2 log p / n)}
///   normal       n^{(c²/2σ²) log n}        or n^{-c² log p log n / ((b-μ)² n)}
SampleSize min_sample_size(const SampleSizeRegime& r, int n, double b, double mean,
                           std::optional<double> target_p = std::nullopt);

}  // namespace tailrisk
