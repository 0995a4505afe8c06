#include "tailrisk/distributions/transformed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tailrisk/distributions/parametric.hpp"
#include "tailrisk/errors.hpp"
#include "tilt_quadrature.hpp"

namespace tailrisk {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kKnots = 2048;

nlohmann::json level_json(double u) {
  if (std::isfinite(u)) return u;
  return u > 0 ? "inf" : "-inf";
}
}  // namespace

// ---------------------------------------------------------------------------
// TruncatedDistribution

TruncatedDistribution::TruncatedDistribution(DistributionPtr base, double level)
    : base_(std::move(base)), level_(level) {
  require(!std::isnan(level), ErrorCode::ParameterDomain, "truncated: level is NaN");
  mass_ = base_->cdf(level_);
  require(mass_ > 0.0, ErrorCode::EmptyTruncation, "truncated: level lies below the support");
  if (!std::isfinite(level_) || level_ >= base_->support().upper) {
    mean_ = base_->mean();
    variance_ = base_->variance();
  } else {
    const auto m = detail::tilted_moments(*base_, 0.0, level_);
    mean_ = m.mean;
    variance_ = m.variance;
  }
}

nlohmann::json TruncatedDistribution::spec() const {
  return {{"family", family()}, {"params", {{"base", base_->spec()}, {"level", level_json(level_)}}}};
}

double TruncatedDistribution::pdf(double x) const {
  return x > level_ ? 0.0 : base_->pdf(x) / mass_;
}

double TruncatedDistribution::cdf(double x) const {
  return x >= level_ ? 1.0 : base_->cdf(x) / mass_;
}

double TruncatedDistribution::sf(double x) const {
  if (x >= level_) return 0.0;
  return std::max(0.0, base_->sf(x) - base_->sf(level_)) / mass_;
}

double TruncatedDistribution::quantile(double q) const {
  if (q >= 1.0) return std::min(level_, base_->support().upper);
  return std::min(level_, base_->quantile(q * mass_));
}

double TruncatedDistribution::mean() const { return mean_; }
double TruncatedDistribution::variance() const { return variance_; }

double TruncatedDistribution::sample(Rng& rng) const {
  if (mass_ >= 0.5) {
    for (;;) {
      const double x = base_->sample(rng);
      if (x <= level_) return x;
    }
  }
  return quantile(rng.uniform());
}

Support TruncatedDistribution::support() const {
  const Support s = base_->support();
  return {s.lower, std::min(s.upper, level_)};
}

double TruncatedDistribution::mgf_domain_sup() const {
  return std::isfinite(level_) ? kInf : base_->mgf_domain_sup();
}

bool TruncatedDistribution::base_tilts_in_closed_form(double theta) const {
  if (!(theta < base_->mgf_domain_sup())) return false;
  const Distribution* b = base_.get();
  if (dynamic_cast<const ExponentialDistribution*>(b) || dynamic_cast<const NormalDistribution*>(b) ||
      dynamic_cast<const GammaDistribution*>(b) || dynamic_cast<const HalfNormalDistribution*>(b)) {
    return true;
  }
  if (const auto* w = dynamic_cast<const WeibullDistribution*>(b)) return w->shape() == 1.0;
  return false;
}

TruncatedDistribution::TiltMoments TruncatedDistribution::tilt_moments(double theta) const {
  const auto m = detail::tilted_moments(*base_, theta, level_);
  return {m.log_mass - std::log(mass_), m.mean, m.variance};
}

double TruncatedDistribution::log_mgf(double theta) const {
  if (theta == 0.0) return 0.0;
  check_mgf_domain(theta);
  if (!std::isfinite(level_)) return base_->log_mgf(theta);
  if (base_tilts_in_closed_form(theta)) {
    // ψ_u(θ) = ψ(θ) + log F_θ(u) - log F(u)
    return base_->log_mgf(theta) + std::log(base_->tilted(theta)->cdf(level_)) - std::log(mass_);
  }
  return tilt_moments(theta).log_mass;
}

double TruncatedDistribution::log_mgf_d1(double theta) const {
  if (theta == 0.0) return mean_;
  check_mgf_domain(theta);
  if (!std::isfinite(level_)) return base_->log_mgf_d1(theta);
  return tilt_moments(theta).mean;
}

double TruncatedDistribution::log_mgf_d2(double theta) const {
  if (theta == 0.0) return variance_;
  check_mgf_domain(theta);
  if (!std::isfinite(level_)) return base_->log_mgf_d2(theta);
  return tilt_moments(theta).variance;
}

DistributionPtr TruncatedDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  if (!std::isfinite(level_)) return base_->tilted(theta);
  // Tilting commutes with truncation.
  if (base_tilts_in_closed_form(theta)) {
    return std::make_shared<TruncatedDistribution>(base_->tilted(theta), level_);
  }
  return std::make_shared<NumericTiltedDistribution>(ptr(), theta);
}

// ---------------------------------------------------------------------------
// NumericTiltedDistribution

NumericTiltedDistribution::NumericTiltedDistribution(DistributionPtr base, double theta)
    : base_(std::move(base)), theta_(theta) {
  const auto m = detail::tilted_moments(*base_, theta_, kInf);
  psi_ = m.log_mass;
  mean_ = m.mean;
  variance_ = m.variance;
  const auto w = detail::tilted_window(*base_, theta_, kInf);
  lo_ = w.lo;
  hi_ = w.hi;

  // Simpson's rule on each knot interval, then normalized.
  knots_.resize(kKnots);
  knot_cdf_.assign(kKnots, 0.0);
  const double step = (hi_ - lo_) / static_cast<double>(kKnots - 1);
  for (std::size_t i = 0; i < kKnots; ++i) knots_[i] = lo_ + step * static_cast<double>(i);
  knots_.back() = hi_;
  auto density = [&](double x) {
    const double f = base_->pdf(x);
    return (f > 0.0 && std::isfinite(f)) ? std::exp(theta_ * x + std::log(f) - psi_) : 0.0;
  };
  double prev = density(knots_[0]);
  for (std::size_t i = 1; i < kKnots; ++i) {
    const double next = density(knots_[i]);
    const double mid = density(0.5 * (knots_[i - 1] + knots_[i]));
    knot_cdf_[i] = knot_cdf_[i - 1] + (knots_[i] - knots_[i - 1]) * (prev + 4.0 * mid + next) / 6.0;
    prev = next;
  }
  const double total = knot_cdf_.back();
  require(total > 0.0 && std::isfinite(total), ErrorCode::TiltDomain,
          "tilted: could not tabulate the tilted law");
  for (double& c : knot_cdf_) c /= total;
}

nlohmann::json NumericTiltedDistribution::spec() const {
  return {{"family", family()}, {"params", {{"base", base_->spec()}, {"theta", theta_}}}};
}

double NumericTiltedDistribution::pdf(double x) const {
  const double f = base_->pdf(x);
  return f > 0.0 ? std::exp(theta_ * x + std::log(f) - psi_) : 0.0;
}

double NumericTiltedDistribution::cdf(double x) const {
  if (x <= lo_) return 0.0;
  if (x >= hi_) return 1.0;
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - knots_.begin());
  const double t = (x - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
  return knot_cdf_[i - 1] + t * (knot_cdf_[i] - knot_cdf_[i - 1]);
}

double NumericTiltedDistribution::quantile(double q) const {
  if (q <= 0.0) return lo_;
  if (q >= 1.0) return hi_;
  const auto it = std::lower_bound(knot_cdf_.begin(), knot_cdf_.end(), q);
  const std::size_t i = std::max<std::size_t>(1, static_cast<std::size_t>(it - knot_cdf_.begin()));
  const double dc = knot_cdf_[i] - knot_cdf_[i - 1];
  const double t = dc > 0.0 ? (q - knot_cdf_[i - 1]) / dc : 0.0;
  return knots_[i - 1] + t * (knots_[i] - knots_[i - 1]);
}

double NumericTiltedDistribution::sample(Rng& rng) const { return quantile(rng.uniform()); }

double NumericTiltedDistribution::mgf_domain_sup() const {
  return base_->mgf_domain_sup() - theta_;
}

double NumericTiltedDistribution::log_mgf(double t) const {
  if (t == 0.0) return 0.0;
  check_mgf_domain(t);
  return base_->log_mgf(theta_ + t) - psi_;
}
double NumericTiltedDistribution::log_mgf_d1(double t) const {
  if (t == 0.0) return mean_;
  check_mgf_domain(t);
  return base_->log_mgf_d1(theta_ + t);
}
double NumericTiltedDistribution::log_mgf_d2(double t) const {
  if (t == 0.0) return variance_;
  check_mgf_domain(t);
  return base_->log_mgf_d2(theta_ + t);
}

DistributionPtr NumericTiltedDistribution::tilted(double t) const {
  check_mgf_domain(t);
  if (theta_ + t == 0.0) return base_;
  return base_->tilted(theta_ + t);
}

}  // namespace tailrisk
