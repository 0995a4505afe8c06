#pragma once

#include <span>
#include <vector>

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk {

/// Finitely many weighted atoms. Zero-mass atoms are dropped and duplicate
/// points merged; weights must be nonnegative and sum to 1.
class DiscreteDistribution : public Distribution {
 public:
  DiscreteDistribution(std::vector<double> points, std::vector<double> weights);

  std::span<const double> points() const { return points_; }
  std::span<const double> weights() const { return weights_; }

  std::string family() const override { return "discrete"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  bool discrete() const override { return true; }
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 protected:
  /// Tilted weights exp(θx)w / Σ, computed in log space.
  std::vector<double> tilted_weights(double theta) const;

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // cumulative_[i] = P(X <= points_[i])
  std::vector<double> tail_;        // tail_[i] = P(X >= points_[i])
};

/// Masses on origin + j * spacing. The reported lattice span is the largest
/// h with all atoms on origin' + hZ (spacing times the gcd of occupied
/// index gaps).
class FiniteLatticeDistribution final : public DiscreteDistribution {
 public:
  FiniteLatticeDistribution(double origin, double spacing, std::vector<double> masses);

  double origin() const { return origin_; }
  double spacing() const { return spacing_; }
  std::span<const double> masses() const { return masses_; }

  std::string family() const override { return "finite_lattice"; }
  nlohmann::json spec() const override;
  std::optional<double> lattice_span() const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double origin_;
  double spacing_;
  std::vector<double> masses_;
};

/// Equal mass 1/N on each observation. quantile(q) is the ceil(qN)-th order
/// statistic.
class EmpiricalDistribution final : public Distribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::span<const double> sorted() const { return data_; }
  std::size_t size() const { return data_.size(); }
  double max() const { return data_.back(); }

  std::string family() const override { return "empirical"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double mean() const override { return mean_; }
  double variance() const override;
  double sample(Rng& rng) const override {
    return data_[rng.index(data_.size())];
  }
  Support support() const override { return {data_.front(), data_.back()}; }
  bool discrete() const override { return true; }
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  std::vector<double> data_;
  double mean_;
};

std::shared_ptr<const EmpiricalDistribution> empirical_from(std::vector<double> samples);

}  // namespace tailrisk
