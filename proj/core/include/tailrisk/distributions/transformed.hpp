#pragma once

#include <vector>

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk {

/// Law of X given X <= level for a continuous base law.
class TruncatedDistribution final : public Distribution {
 public:
  TruncatedDistribution(DistributionPtr base, double level);

  const DistributionPtr& base() const { return base_; }
  double level() const { return level_; }
  /// Base mass below the level, F(u).
  double retained_mass() const { return mass_; }

  std::string family() const override { return "truncated"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  bool discrete() const override { return base_->discrete(); }
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  /// Moments of the truncated tilted base by quadrature; index 0 holds
  /// log ∫_{x<=u} e^{θx} f(x) dx.
  struct TiltMoments {
    double log_mass;
    double mean;
    double variance;
  };
  TiltMoments tilt_moments(double theta) const;
  bool base_tilts_in_closed_form(double theta) const;

  DistributionPtr base_;
  double level_;
  double mass_;
  double mean_;
  double variance_;
};

/// Exponential tilt of a continuous law without a closed-form tilted family.
/// ψ and its derivatives come from quadrature of the base density; sampling
/// inverts a tabulated CDF (piecewise linear between 2048 knots).
class NumericTiltedDistribution final : public Distribution {
 public:
  NumericTiltedDistribution(DistributionPtr base, double theta);

  std::string family() const override { return "tilted"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double quantile(double q) const override;
  double mean() const override { return mean_; }
  double variance() const override { return variance_; }
  double sample(Rng& rng) const override;
  Support support() const override { return {lo_, hi_}; }
  double mgf_domain_sup() const override;
  double log_mgf(double t) const override;
  double log_mgf_d1(double t) const override;
  double log_mgf_d2(double t) const override;
  DistributionPtr tilted(double t) const override;

 private:
  DistributionPtr base_;
  double theta_;
  double psi_;
  double mean_;
  double variance_;
  double lo_;
  double hi_;
  std::vector<double> knots_;
  std::vector<double> knot_cdf_;
};

}  // namespace tailrisk
