#pragma once

#include <memory>
#include <vector>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/gpd.hpp"

namespace tailrisk {

/// Empirical body at or below a threshold t joined to a GPD tail for the
/// excesses above t. The tail carries mass q = empirical sf(t), so
/// sf(t + y) = q * gpd_sf(y) for y >= 0.
class SplicedDistribution final : public Distribution {
 public:
  SplicedDistribution(std::vector<double> body, double threshold, double tail_mass,
                      GpdParams tail);

  double threshold() const { return threshold_; }
  double tail_mass() const { return q_; }
  const GpdParams& tail() const { return tail_; }

  std::string family() const override { return "spliced"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  bool regularly_varying() const override { return tail_.shape > 0.0; }
  double mgf_domain_sup() const override;
  /// The mixed body/tail law has no MGF implementation; these throw
  /// UnsupportedClass for θ != 0.
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  std::vector<double> body_;  // sorted, all <= threshold
  double threshold_;
  double q_;
  GpdParams tail_;
};

/// Minimum number of threshold excesses accepted by splice() and gpd_fit().
inline constexpr std::size_t kMinTailExcesses = 10;

/// Threshold used for a tail mass q: the ceil((1-q)N)-th order statistic.
double tail_threshold(const EmpiricalDistribution& data, double tail_quantile);

/// Strictly positive excesses over tail_threshold(data, q).
std::vector<double> tail_excesses(const EmpiricalDistribution& data, double tail_quantile);

/// Joins the empirical body below the (1-q) empirical quantile with the
/// fitted GPD tail. Throws InsufficientTailData with fewer than 10 excesses.
std::shared_ptr<const SplicedDistribution> splice(const EmpiricalDistribution& body,
                                                  double tail_quantile, const GpdParams& fit);

}  // namespace tailrisk
