#pragma once

#include <variant>
#include <vector>

#include "tailrisk/distributions/distribution.hpp"

namespace tailrisk {

namespace family {
/// One-parameter Pareto form with density (ξx)^(-1-1/ξ) on x >= 1/ξ.
struct GeneralizedPareto {
  double xi;
};
/// Student t conditioned on X >= 0 (density doubled).
struct HalfStudentT {
  double nu;
};
struct Exponential {
  double rate = 1.0;
};
struct Normal {
  double mean = 0.0;
  double variance = 1.0;
};
/// Standard normal conditioned on X >= 0.
struct HalfNormal {};
/// Density k x^(k-1) exp(-x^k) on x >= 0.
struct Weibull {
  double shape;
};
struct LogNormal {
  double log_mean = 0.0;
  double log_variance = 1.0;
};
struct Gamma {
  double shape;
  double rate;
};
/// Masses on origin + j * spacing, j = 0..masses.size()-1.
struct FiniteLattice {
  double origin = 0.0;
  double spacing = 1.0;
  std::vector<double> masses;
};
}  // namespace family

using ParametricFamily =
    std::variant<family::GeneralizedPareto, family::HalfStudentT, family::Exponential,
                 family::Normal, family::HalfNormal, family::Weibull, family::LogNormal,
                 family::Gamma, family::FiniteLattice>;

/// Builds the family; throws ParameterDomain on out-of-range parameters.
DistributionPtr make_family(const ParametricFamily& spec);

class GeneralizedParetoDistribution final : public Distribution {
 public:
  explicit GeneralizedParetoDistribution(double xi);
  double xi() const { return xi_; }

  std::string family() const override { return "generalized_pareto"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  bool regularly_varying() const override { return true; }
  double mgf_domain_sup() const override { return 0.0; }

 private:
  double xi_;
};

class HalfStudentTDistribution final : public Distribution {
 public:
  explicit HalfStudentTDistribution(double nu);
  double nu() const { return nu_; }

  std::string family() const override { return "half_student_t"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  bool regularly_varying() const override { return true; }
  double mgf_domain_sup() const override { return 0.0; }

 private:
  double nu_;
  double log_norm_;
};

class ExponentialDistribution final : public Distribution {
 public:
  explicit ExponentialDistribution(double rate);
  double rate() const { return rate_; }

  std::string family() const override { return "exponential"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override { return 1.0 / rate_; }
  double variance() const override { return 1.0 / (rate_ * rate_); }
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override { return rate_; }
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double rate_;
};

class NormalDistribution final : public Distribution {
 public:
  NormalDistribution(double mean, double variance);

  std::string family() const override { return "normal"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override { return mu_; }
  double variance() const override { return sigma_ * sigma_; }
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double mu_;
  double sigma_;
};

/// Normal(location, 1) conditioned on X >= 0. location = 0 is the
/// half-normal; other locations arise as its exponential tilts.
class HalfNormalDistribution final : public Distribution {
 public:
  explicit HalfNormalDistribution(double location = 0.0);
  double location() const { return loc_; }

  std::string family() const override { return "half_normal"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double loc_;
  double log_mass_;  // log P(N(loc,1) >= 0)
};

class WeibullDistribution final : public Distribution {
 public:
  explicit WeibullDistribution(double shape);
  double shape() const { return k_; }

  std::string family() const override { return "weibull"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override;
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double k_;
};

class LogNormalDistribution final : public Distribution {
 public:
  LogNormalDistribution(double log_mean, double log_variance);

  std::string family() const override { return "lognormal"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override;
  double variance() const override;
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override { return 0.0; }

 private:
  double m_;
  double s_;
};

class GammaDistribution final : public Distribution {
 public:
  GammaDistribution(double shape, double rate);
  double shape() const { return alpha_; }
  double rate() const { return beta_; }

  std::string family() const override { return "gamma"; }
  nlohmann::json spec() const override;
  double pdf(double x) const override;
  double cdf(double x) const override;
  double sf(double x) const override;
  double quantile(double q) const override;
  double isf(double p) const override;
  double mean() const override { return alpha_ / beta_; }
  double variance() const override { return alpha_ / (beta_ * beta_); }
  double sample(Rng& rng) const override;
  Support support() const override;
  double mgf_domain_sup() const override { return beta_; }
  double log_mgf(double theta) const override;
  double log_mgf_d1(double theta) const override;
  double log_mgf_d2(double theta) const override;
  DistributionPtr tilted(double theta) const override;

 private:
  double alpha_;
  double beta_;
};

}  // namespace tailrisk
