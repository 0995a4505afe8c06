#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "tailrisk/rng.hpp"

namespace tailrisk {

enum class TailClass { Light, Heavy };

struct Support {
  double lower;
  double upper;
};

class Distribution;
using DistributionPtr = std::shared_ptr<const Distribution>;

/// Univariate input law. Implementations are immutable after construction and
/// are always owned through DistributionPtr (see the make_* factories).
///
/// For discrete laws pdf() returns the probability mass at x.
/// The log-MGF ψ(θ) = log E[exp(θX)] is available for θ < mgf_domain_sup();
/// heavy-tailed laws report a domain supremum of 0.
class Distribution : public std::enable_shared_from_this<Distribution> {
 public:
  virtual ~Distribution() = default;

  virtual std::string family() const = 0;
  virtual nlohmann::json spec() const = 0;

  virtual double pdf(double x) const = 0;
  virtual double cdf(double x) const = 0;
  virtual double sf(double x) const { return 1.0 - cdf(x); }
  virtual double quantile(double q) const = 0;
  /// Inverse survival function, sf(isf(p)) = p. Overridden where the upper
  /// tail can be inverted without going through 1 - p.
  virtual double isf(double p) const { return quantile(1.0 - p); }
  virtual double mean() const = 0;
  virtual double variance() const = 0;
  virtual double sample(Rng& rng) const = 0;
  virtual Support support() const = 0;

  virtual bool discrete() const { return false; }
  virtual std::optional<double> lattice_span() const { return std::nullopt; }
  /// True for power-law tails sf(x) = L(x) x^(-alpha).
  virtual bool regularly_varying() const { return false; }

  virtual double mgf_domain_sup() const = 0;
  TailClass tail_class() const {
    return mgf_domain_sup() > 0.0 ? TailClass::Light : TailClass::Heavy;
  }

  /// Defaults integrate against pdf(); only valid for continuous laws.
  virtual double log_mgf(double theta) const;
  virtual double log_mgf_d1(double theta) const;
  virtual double log_mgf_d2(double theta) const;

  /// Law with density exp(θx - ψ(θ)) relative to this one. The default builds
  /// a tabulated numeric tilt; families with closed-form tilts override it.
  virtual DistributionPtr tilted(double theta) const;

  DistributionPtr ptr() const { return shared_from_this(); }

 protected:
  void check_mgf_domain(double theta) const;
};

/// Exponential tilt with domain validation; θ = 0 returns the input law.
DistributionPtr tilt(const DistributionPtr& dist, double theta);

/// Conditional law of X given X <= u (right truncation). u = +inf is allowed.
/// Empirical laws truncated at or above their maximum are returned unchanged.
DistributionPtr truncate(const DistributionPtr& dist, double u);

}  // namespace tailrisk
