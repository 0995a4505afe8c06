#include "tailrisk/distributions/parametric.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/transformed.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/numeric.hpp"

namespace tailrisk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;

void require_param(bool ok, const std::string& what) {
  require(ok, ErrorCode::ParameterDomain, what);
}

double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }
double std_normal_cdf(double z) { return 0.5 * boost::math::erfc(-z / kSqrt2); }
double std_normal_sf(double z) { return 0.5 * boost::math::erfc(z / kSqrt2); }
/// z with P(Z > z) = p.
double std_normal_isf(double p) { return kSqrt2 * boost::math::erfc_inv(2.0 * p); }

/// Smallest x >= lower with cdf(x) >= q, by bracketed bisection.
double invert_cdf(const Distribution& d, double q, double lower) {
  if (q <= 0.0) return lower;
  if (q >= 1.0) return kInf;
  double hi = std::max(1.0, lower + 1.0);
  while (d.cdf(hi) < q) hi *= 2.0;
  return numeric::bisect_increasing([&](double x) { return d.cdf(x); }, q, lower, hi, 1e-13);
}

/// x >= lower with sf(x) = p; bisection on -sf keeps precision deep in the tail.
double invert_sf(const Distribution& d, double p, double lower) {
  if (p >= 1.0) return lower;
  if (p <= 0.0) return kInf;
  double hi = std::max(1.0, lower + 1.0);
  while (d.sf(hi) > p) hi *= 2.0;
  return numeric::bisect_increasing([&](double x) { return -d.sf(x); }, -p, lower, hi, 1e-13);
}

}  // namespace

// ---------------------------------------------------------------------------
// GeneralizedPareto (one-parameter form on [1/ξ, ∞))

GeneralizedParetoDistribution::GeneralizedParetoDistribution(double xi) : xi_(xi) {
  require_param(std::isfinite(xi) && xi > 0.0, "generalized_pareto: xi must be > 0");
}

nlohmann::json GeneralizedParetoDistribution::spec() const {
  return {{"family", family()}, {"params", {{"xi", xi_}}}};
}

double GeneralizedParetoDistribution::pdf(double x) const {
  if (x < 1.0 / xi_) return 0.0;
  return std::exp((-1.0 - 1.0 / xi_) * std::log(xi_ * x));
}

double GeneralizedParetoDistribution::sf(double x) const {
  if (x <= 1.0 / xi_) return 1.0;
  return std::exp(-std::log(xi_ * x) / xi_);
}

double GeneralizedParetoDistribution::cdf(double x) const {
  if (x <= 1.0 / xi_) return 0.0;
  return -std::expm1(-std::log(xi_ * x) / xi_);
}

double GeneralizedParetoDistribution::quantile(double q) const {
  if (q <= 0.0) return 1.0 / xi_;
  if (q >= 1.0) return kInf;
  return std::exp(-xi_ * std::log1p(-q)) / xi_;
}

double GeneralizedParetoDistribution::isf(double p) const {
  if (p >= 1.0) return 1.0 / xi_;
  if (p <= 0.0) return kInf;
  return std::exp(-xi_ * std::log(p)) / xi_;
}

double GeneralizedParetoDistribution::mean() const {
  return xi_ < 1.0 ? 1.0 / (xi_ * (1.0 - xi_)) : kInf;
}

double GeneralizedParetoDistribution::variance() const {
  if (xi_ >= 0.5) return kInf;
  const double m = 1.0 / (xi_ * (1.0 - xi_));
  return 1.0 / (xi_ * xi_ * (1.0 - 2.0 * xi_)) - m * m;
}

double GeneralizedParetoDistribution::sample(Rng& rng) const { return isf(rng.uniform()); }

Support GeneralizedParetoDistribution::support() const { return {1.0 / xi_, kInf}; }

// ---------------------------------------------------------------------------
// HalfStudentT

HalfStudentTDistribution::HalfStudentTDistribution(double nu) : nu_(nu) {
  require_param(std::isfinite(nu) && nu > 0.0, "half_student_t: nu must be > 0");
  log_norm_ = std::log(2.0) + std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu) -
              0.5 * std::log(nu * std::numbers::pi);
}

nlohmann::json HalfStudentTDistribution::spec() const {
  return {{"family", family()}, {"params", {{"nu", nu_}}}};
}

double HalfStudentTDistribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::exp(log_norm_ - 0.5 * (nu_ + 1.0) * std::log1p(x * x / nu_));
}

double HalfStudentTDistribution::sf(double x) const {
  if (x <= 0.0) return 1.0;
  return boost::math::ibeta(0.5 * nu_, 0.5, nu_ / (nu_ + x * x));
}

double HalfStudentTDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  return boost::math::ibeta(0.5, 0.5 * nu_, x * x / (nu_ + x * x));
}

double HalfStudentTDistribution::quantile(double q) const { return invert_cdf(*this, q, 0.0); }

double HalfStudentTDistribution::isf(double p) const { return invert_sf(*this, p, 0.0); }

double HalfStudentTDistribution::mean() const {
  if (nu_ <= 1.0) return kInf;
  return 2.0 * std::sqrt(nu_) *
         std::exp(std::lgamma(0.5 * (nu_ + 1.0)) - std::lgamma(0.5 * nu_)) /
         (std::sqrt(std::numbers::pi) * (nu_ - 1.0));
}

double HalfStudentTDistribution::variance() const {
  if (nu_ <= 2.0) return kInf;
  const double m = mean();
  return nu_ / (nu_ - 2.0) - m * m;
}

double HalfStudentTDistribution::sample(Rng& rng) const {
  const double z = rng.normal();
  const double g = rng.gamma(0.5 * nu_);  // chi-square(nu) / 2
  return std::abs(z) * std::sqrt(0.5 * nu_ / g);
}

Support HalfStudentTDistribution::support() const { return {0.0, kInf}; }

// ---------------------------------------------------------------------------
// Exponential

ExponentialDistribution::ExponentialDistribution(double rate) : rate_(rate) {
  require_param(std::isfinite(rate) && rate > 0.0, "exponential: rate must be > 0");
}

nlohmann::json ExponentialDistribution::spec() const {
  return {{"family", family()}, {"params", {{"rate", rate_}}}};
}

double ExponentialDistribution::pdf(double x) const {
  return x < 0.0 ? 0.0 : rate_ * std::exp(-rate_ * x);
}
double ExponentialDistribution::cdf(double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-rate_ * x);
}
double ExponentialDistribution::sf(double x) const {
  return x <= 0.0 ? 1.0 : std::exp(-rate_ * x);
}
double ExponentialDistribution::quantile(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return kInf;
  return -std::log1p(-q) / rate_;
}
double ExponentialDistribution::isf(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return kInf;
  return -std::log(p) / rate_;
}
double ExponentialDistribution::sample(Rng& rng) const { return rng.exponential() / rate_; }
Support ExponentialDistribution::support() const { return {0.0, kInf}; }

double ExponentialDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  return std::log(rate_) - std::log(rate_ - theta);
}
double ExponentialDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  return 1.0 / (rate_ - theta);
}
double ExponentialDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  return 1.0 / ((rate_ - theta) * (rate_ - theta));
}
DistributionPtr ExponentialDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  return std::make_shared<ExponentialDistribution>(rate_ - theta);
}

// ---------------------------------------------------------------------------
// Normal

NormalDistribution::NormalDistribution(double mean, double variance)
    : mu_(mean), sigma_(std::sqrt(variance)) {
  require_param(std::isfinite(mean), "normal: mean must be finite");
  require_param(std::isfinite(variance) && variance > 0.0, "normal: variance must be > 0");
}

nlohmann::json NormalDistribution::spec() const {
  return {{"family", family()}, {"params", {{"mean", mu_}, {"variance", sigma_ * sigma_}}}};
}

double NormalDistribution::pdf(double x) const {
  return std_normal_pdf((x - mu_) / sigma_) / sigma_;
}
double NormalDistribution::cdf(double x) const { return std_normal_cdf((x - mu_) / sigma_); }
double NormalDistribution::sf(double x) const { return std_normal_sf((x - mu_) / sigma_); }
double NormalDistribution::quantile(double q) const {
  if (q <= 0.0) return -kInf;
  if (q >= 1.0) return kInf;
  return mu_ - sigma_ * std_normal_isf(q);
}
double NormalDistribution::isf(double p) const {
  if (p <= 0.0) return kInf;
  if (p >= 1.0) return -kInf;
  return mu_ + sigma_ * std_normal_isf(p);
}
double NormalDistribution::sample(Rng& rng) const { return mu_ + sigma_ * rng.normal(); }
Support NormalDistribution::support() const { return {-kInf, kInf}; }
double NormalDistribution::mgf_domain_sup() const { return kInf; }

double NormalDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  return mu_ * theta + 0.5 * sigma_ * sigma_ * theta * theta;
}
double NormalDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  return mu_ + sigma_ * sigma_ * theta;
}
double NormalDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  return sigma_ * sigma_;
}
DistributionPtr NormalDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  return std::make_shared<NormalDistribution>(mu_ + sigma_ * sigma_ * theta, sigma_ * sigma_);
}

// ---------------------------------------------------------------------------
// HalfNormal: N(loc, 1) conditioned on X >= 0

namespace {
/// φ(t)/Φ(t)
double mills_inverse(double t) { return std_normal_pdf(t) / std_normal_cdf(t); }
}  // namespace

HalfNormalDistribution::HalfNormalDistribution(double location) : loc_(location) {
  require_param(std::isfinite(location) && location > -30.0,
                "half_normal: location must be finite and > -30");
  log_mass_ = std::log(std_normal_cdf(loc_));
}

nlohmann::json HalfNormalDistribution::spec() const {
  nlohmann::json params = nlohmann::json::object();
  if (loc_ != 0.0) params["location"] = loc_;
  return {{"family", family()}, {"params", params}};
}

double HalfNormalDistribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  return std::exp(std::log(std_normal_pdf(x - loc_)) - log_mass_);
}

double HalfNormalDistribution::sf(double x) const {
  if (x <= 0.0) return 1.0;
  return std::exp(std::log(std_normal_sf(x - loc_)) - log_mass_);
}

double HalfNormalDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  const double s = sf(x);
  if (s < 0.5) return 1.0 - s;
  const double diff = 0.5 * (boost::math::erf((x - loc_) / kSqrt2) + boost::math::erf(loc_ / kSqrt2));
  return diff * std::exp(-log_mass_);
}

double HalfNormalDistribution::quantile(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return kInf;
  return isf(1.0 - q);
}

double HalfNormalDistribution::isf(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return kInf;
  return std::max(0.0, loc_ + std_normal_isf(p * std::exp(log_mass_)));
}

double HalfNormalDistribution::mean() const { return loc_ + mills_inverse(loc_); }

double HalfNormalDistribution::variance() const {
  const double r = mills_inverse(loc_);
  return 1.0 - r * (loc_ + r);
}

double HalfNormalDistribution::sample(Rng& rng) const { return isf(rng.uniform()); }
Support HalfNormalDistribution::support() const { return {0.0, kInf}; }
double HalfNormalDistribution::mgf_domain_sup() const { return kInf; }

double HalfNormalDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  return theta * loc_ + 0.5 * theta * theta + std::log(std_normal_cdf(loc_ + theta)) - log_mass_;
}
double HalfNormalDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  const double t = loc_ + theta;
  return t + mills_inverse(t);
}
double HalfNormalDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  const double t = loc_ + theta;
  const double r = mills_inverse(t);
  return 1.0 - r * (t + r);
}
DistributionPtr HalfNormalDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  return std::make_shared<HalfNormalDistribution>(loc_ + theta);
}

// ---------------------------------------------------------------------------
// Weibull

WeibullDistribution::WeibullDistribution(double shape) : k_(shape) {
  require_param(std::isfinite(shape) && shape > 0.0, "weibull: shape must be > 0");
}

nlohmann::json WeibullDistribution::spec() const {
  return {{"family", family()}, {"params", {{"shape", k_}}}};
}

double WeibullDistribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return k_ < 1.0 ? kInf : (k_ == 1.0 ? 1.0 : 0.0);
  return k_ * std::exp((k_ - 1.0) * std::log(x) - std::pow(x, k_));
}
double WeibullDistribution::cdf(double x) const {
  return x <= 0.0 ? 0.0 : -std::expm1(-std::pow(x, k_));
}
double WeibullDistribution::sf(double x) const {
  return x <= 0.0 ? 1.0 : std::exp(-std::pow(x, k_));
}
double WeibullDistribution::quantile(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return kInf;
  return std::pow(-std::log1p(-q), 1.0 / k_);
}
double WeibullDistribution::isf(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return kInf;
  return std::pow(-std::log(p), 1.0 / k_);
}
double WeibullDistribution::mean() const { return std::tgamma(1.0 + 1.0 / k_); }
double WeibullDistribution::variance() const {
  const double m = mean();
  return std::tgamma(1.0 + 2.0 / k_) - m * m;
}
double WeibullDistribution::sample(Rng& rng) const {
  return std::pow(rng.exponential(), 1.0 / k_);
}
Support WeibullDistribution::support() const { return {0.0, kInf}; }

double WeibullDistribution::mgf_domain_sup() const {
  if (k_ > 1.0) return kInf;
  return k_ == 1.0 ? 1.0 : 0.0;
}

double WeibullDistribution::log_mgf(double theta) const {
  if (k_ == 1.0) {
    check_mgf_domain(theta);
    return -std::log1p(-theta);
  }
  return Distribution::log_mgf(theta);
}
double WeibullDistribution::log_mgf_d1(double theta) const {
  if (k_ == 1.0) {
    check_mgf_domain(theta);
    return 1.0 / (1.0 - theta);
  }
  return Distribution::log_mgf_d1(theta);
}
double WeibullDistribution::log_mgf_d2(double theta) const {
  if (k_ == 1.0) {
    check_mgf_domain(theta);
    return 1.0 / ((1.0 - theta) * (1.0 - theta));
  }
  return Distribution::log_mgf_d2(theta);
}
DistributionPtr WeibullDistribution::tilted(double theta) const {
  if (k_ == 1.0) {
    check_mgf_domain(theta);
    return std::make_shared<ExponentialDistribution>(1.0 - theta);
  }
  return Distribution::tilted(theta);
}

// ---------------------------------------------------------------------------
// LogNormal

LogNormalDistribution::LogNormalDistribution(double log_mean, double log_variance)
    : m_(log_mean), s_(std::sqrt(log_variance)) {
  require_param(std::isfinite(log_mean), "lognormal: log_mean must be finite");
  require_param(std::isfinite(log_variance) && log_variance > 0.0,
                "lognormal: log_variance must be > 0");
}

nlohmann::json LogNormalDistribution::spec() const {
  return {{"family", family()}, {"params", {{"log_mean", m_}, {"log_variance", s_ * s_}}}};
}

double LogNormalDistribution::pdf(double x) const {
  if (x <= 0.0) return 0.0;
  return std_normal_pdf((std::log(x) - m_) / s_) / (s_ * x);
}
double LogNormalDistribution::cdf(double x) const {
  return x <= 0.0 ? 0.0 : std_normal_cdf((std::log(x) - m_) / s_);
}
double LogNormalDistribution::sf(double x) const {
  return x <= 0.0 ? 1.0 : std_normal_sf((std::log(x) - m_) / s_);
}
double LogNormalDistribution::quantile(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return kInf;
  return std::exp(m_ - s_ * std_normal_isf(q));
}
double LogNormalDistribution::isf(double p) const {
  if (p >= 1.0) return 0.0;
  if (p <= 0.0) return kInf;
  return std::exp(m_ + s_ * std_normal_isf(p));
}
double LogNormalDistribution::mean() const { return std::exp(m_ + 0.5 * s_ * s_); }
double LogNormalDistribution::variance() const {
  return std::expm1(s_ * s_) * std::exp(2.0 * m_ + s_ * s_);
}
double LogNormalDistribution::sample(Rng& rng) const { return std::exp(m_ + s_ * rng.normal()); }
Support LogNormalDistribution::support() const { return {0.0, kInf}; }

// ---------------------------------------------------------------------------
// Gamma (shape α, rate β)

GammaDistribution::GammaDistribution(double shape, double rate) : alpha_(shape), beta_(rate) {
  require_param(std::isfinite(shape) && shape > 0.0, "gamma: shape must be > 0");
  require_param(std::isfinite(rate) && rate > 0.0, "gamma: rate must be > 0");
}

nlohmann::json GammaDistribution::spec() const {
  return {{"family", family()}, {"params", {{"shape", alpha_}, {"rate", beta_}}}};
}

double GammaDistribution::pdf(double x) const {
  if (x < 0.0) return 0.0;
  if (x == 0.0) return alpha_ < 1.0 ? kInf : (alpha_ == 1.0 ? beta_ : 0.0);
  return std::exp((alpha_ - 1.0) * std::log(x) - beta_ * x + alpha_ * std::log(beta_) -
                  std::lgamma(alpha_));
}
double GammaDistribution::cdf(double x) const {
  return x <= 0.0 ? 0.0 : boost::math::gamma_p(alpha_, beta_ * x);
}
double GammaDistribution::sf(double x) const {
  return x <= 0.0 ? 1.0 : boost::math::gamma_q(alpha_, beta_ * x);
}
double GammaDistribution::quantile(double q) const { return invert_cdf(*this, q, 0.0); }
double GammaDistribution::isf(double p) const { return invert_sf(*this, p, 0.0); }
double GammaDistribution::sample(Rng& rng) const { return rng.gamma(alpha_) / beta_; }
Support GammaDistribution::support() const { return {0.0, kInf}; }

double GammaDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  return -alpha_ * std::log1p(-theta / beta_);
}
double GammaDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  return alpha_ / (beta_ - theta);
}
double GammaDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  return alpha_ / ((beta_ - theta) * (beta_ - theta));
}
DistributionPtr GammaDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  return std::make_shared<GammaDistribution>(alpha_, beta_ - theta);
}

// ---------------------------------------------------------------------------

DistributionPtr make_family(const ParametricFamily& spec) {
  struct Builder {
    DistributionPtr operator()(const family::GeneralizedPareto& f) const {
      return std::make_shared<GeneralizedParetoDistribution>(f.xi);
    }
    DistributionPtr operator()(const family::HalfStudentT& f) const {
      return std::make_shared<HalfStudentTDistribution>(f.nu);
    }
    DistributionPtr operator()(const family::Exponential& f) const {
      return std::make_shared<ExponentialDistribution>(f.rate);
    }
    DistributionPtr operator()(const family::Normal& f) const {
      return std::make_shared<NormalDistribution>(f.mean, f.variance);
    }
    DistributionPtr operator()(const family::HalfNormal&) const {
      return std::make_shared<HalfNormalDistribution>();
    }
    DistributionPtr operator()(const family::Weibull& f) const {
      return std::make_shared<WeibullDistribution>(f.shape);
    }
    DistributionPtr operator()(const family::LogNormal& f) const {
      return std::make_shared<LogNormalDistribution>(f.log_mean, f.log_variance);
    }
    DistributionPtr operator()(const family::Gamma& f) const {
      return std::make_shared<GammaDistribution>(f.shape, f.rate);
    }
    DistributionPtr operator()(const family::FiniteLattice& f) const {
      return std::make_shared<FiniteLatticeDistribution>(f.origin, f.spacing, f.masses);
    }
  };
  return std::visit(Builder{}, spec);
}

}  // namespace tailrisk
