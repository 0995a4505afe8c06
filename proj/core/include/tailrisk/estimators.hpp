#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "tailrisk/asymptotics.hpp"
#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/rng.hpp"

namespace tailrisk {

enum class Estimator { Crude, ConditionalMc, TiltedIs };

std::string_view to_string(Estimator e) noexcept;

/// Accepts "crude", "conditional_mc", "tilted_is"; anything else is a Config error.
Estimator estimator_from_string(std::string_view name);

struct McOptions {
  std::uint64_t replications = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: default_worker_count()
};

/// Monte Carlo estimate of P(S_n > γ). std_error is the replicate standard
/// deviation over sqrt(R).
struct EstimateResult {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t replications = 0;
  Estimator estimator = Estimator::Crude;
  std::uint64_t seed = 0;
  double theta = 0.0;  // tilt used by TiltedIs, 0 otherwise

  double relative_error() const { return estimate > 0.0 ? std_error / estimate : 0.0; }
  nlohmann::json to_json() const;
};

// Replicate scores as functions of the drawn summands. The estimators below
// evaluate exactly these functions, so exact enumeration over a finite support
// yields the estimators' expectations.

/// I(Σ x > γ)
double crude_score(std::span<const double> xs, double gamma);

/// n * sf(max(M, γ - S)) over the first n-1 summands (M_0 = -inf, S_0 = 0).
double ak_score(const Distribution& dist, std::span<const double> head, int n, double gamma);

/// exp(-θ S + n ψ) I(S > γ) for summands drawn from the θ-tilted law.
double tilted_score(std::span<const double> xs, double gamma, double theta, double psi);

/// One replicate each, drawing from rng.
double crude_replicate(const Distribution& dist, int n, double gamma, Rng& rng);
double ak_replicate(const Distribution& dist, int n, double gamma, Rng& rng);
double tilted_replicate(const Distribution& tilted_law, int n, double gamma, double theta,
                        double psi, Rng& rng);

/// Replicate j of every estimator runs on Rng(seed, {estimator id, j}).
EstimateResult crude_mc(const Distribution& dist, int n, double gamma, const McOptions& opts);
EstimateResult cond_mc_ak(const Distribution& dist, int n, double gamma, const McOptions& opts);
/// Importance sampling under the θ*-tilted law solving ψ'(θ) = b, γ = nb.
EstimateResult is_tilted_mc(const Distribution& dist, int n, double b, const McOptions& opts);
/// The same estimator at an arbitrary θ in the MGF domain (θ = 0 is crude).
EstimateResult is_tilted_mc_at(const Distribution& dist, int n, double gamma, double theta,
                               const McOptions& opts);

enum class EstimatorChoice { Auto, Crude, ConditionalMc, TiltedIs };

EstimatorChoice estimator_choice_from_string(std::string_view name);
std::string_view to_string(EstimatorChoice c) noexcept;

/// Dispatches to one estimator. Auto uses tilted IS for light tails and
/// conditional MC otherwise. Returns an exact 0 when n * sup(support) <= γ, and
/// runs crude sampling when tilted IS is asked for a level γ/n at or below the
/// mean (the tilt equation has no positive root there).
EstimateResult estimate_tail(const Distribution& dist, int n, double gamma,
                             EstimatorChoice choice, const McOptions& opts);

/// Exact P(S_n > γ) (Strict) or P(S_n >= γ) (NonStrict) by repeated discrete
/// convolution on the lattice. Throws Resource beyond 10^6 grid points.
double exact_convolution(const FiniteLatticeDistribution& dist, int n, double gamma,
                         Inequality inequality);

/// 1 - (1 - 1/N)^n: bound on P(maximum not uniquely attained) for n draws from
/// N equally weighted atoms.
double cond_mc_bias_bound(int n, double support_size);

/// Closed-form P(S_n > γ) where one exists: exponential and gamma (Erlang /
/// incomplete gamma), normal, finite lattice (convolution).
std::optional<double> exact_tail(const Distribution& dist, int n, double gamma);

}  // namespace tailrisk
