#include "tailrisk/distributions/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "tailrisk/distributions/discrete.hpp"
#include "tailrisk/distributions/transformed.hpp"
#include "tailrisk/errors.hpp"
#include "tailrisk/numeric.hpp"
#include "tilt_quadrature.hpp"

namespace tailrisk {

namespace detail {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kWindowDepth = 60.0;
constexpr int kScanPoints = 512;
}  // namespace

Window tilted_window(const Distribution& base, double theta, double upper) {
  const Support s = base.support();
  double lo = std::isfinite(s.lower) ? s.lower : base.quantile(1e-16);
  double hi = std::min(upper, s.upper);
  const bool open_right = !std::isfinite(hi);
  if (open_right) hi = std::max(base.isf(1e-16), lo + 1.0);

  auto log_g = [&](double x) {
    const double f = base.pdf(x);
    return f > 0.0 ? theta * x + std::log(f) : -kInf;
  };
  auto scan_peak = [&](double a, double b) {
    double best = -kInf;
    for (int i = 1; i < kScanPoints; ++i) {
      const double x = a + (b - a) * i / kScanPoints;
      const double v = log_g(x);
      if (std::isfinite(v)) best = std::max(best, v);
    }
    return best;
  };
  double peak = scan_peak(lo, hi);
  if (open_right) {
    // Extend until the integrand has decayed far below its peak.
    for (int i = 0; i < 200 && log_g(hi) > peak - kWindowDepth; ++i) {
      hi = lo + 2.0 * (hi - lo);
      peak = std::max(peak, scan_peak(lo, hi));
    }
  }
  return {lo, hi, peak};
}

QuadratureMoments tilted_moments(const Distribution& base, double theta, double upper) {
  const Window w = tilted_window(base, theta, upper);
  auto weight = [&](double x) {
    const double f = base.pdf(x);
    if (!(f > 0.0) || !std::isfinite(f)) return 0.0;
    return std::exp(theta * x + std::log(f) - w.log_peak);
  };
  const double m0 = numeric::integrate(weight, w.lo, w.hi);
  const double m1 = numeric::integrate([&](double x) { return x * weight(x); }, w.lo, w.hi) / m0;
  const double m2 = numeric::integrate(
                        [&](double x) {
                          const double d = x - m1;
                          return d * d * weight(x);
                        },
                        w.lo, w.hi) /
                    m0;
  return {w.log_peak + std::log(m0), m1, m2};
}
}  // namespace detail

void Distribution::check_mgf_domain(double theta) const {
  const double sup = mgf_domain_sup();
  if (theta < sup) return;
  if (sup <= 0.0 && theta > 0.0) {
    fail(ErrorCode::NoMgf, family() + ": moment generating function is infinite for theta > 0");
  }
  fail(ErrorCode::TiltDomain, family() + ": theta outside the MGF domain");
}

double Distribution::log_mgf(double theta) const {
  if (theta == 0.0) return 0.0;
  check_mgf_domain(theta);
  return detail::tilted_moments(*this, theta, std::numeric_limits<double>::infinity()).log_mass;
}

double Distribution::log_mgf_d1(double theta) const {
  if (theta == 0.0) return mean();
  check_mgf_domain(theta);
  return detail::tilted_moments(*this, theta, std::numeric_limits<double>::infinity()).mean;
}

double Distribution::log_mgf_d2(double theta) const {
  if (theta == 0.0) return variance();
  check_mgf_domain(theta);
  return detail::tilted_moments(*this, theta, std::numeric_limits<double>::infinity()).variance;
}

DistributionPtr Distribution::tilted(double theta) const {
  check_mgf_domain(theta);
  require(!discrete(), ErrorCode::TiltDomain, family() + ": no numeric tilt for discrete laws");
  return std::make_shared<NumericTiltedDistribution>(ptr(), theta);
}

DistributionPtr tilt(const DistributionPtr& dist, double theta) {
  require(std::isfinite(theta), ErrorCode::TiltDomain, "tilt: theta must be finite");
  if (theta == 0.0) return dist;
  if (!(theta < dist->mgf_domain_sup())) {
    if (dist->mgf_domain_sup() <= 0.0 && theta > 0.0) {
      fail(ErrorCode::NoMgf, "tilt: " + dist->family() + " has no finite MGF for theta > 0");
    }
    fail(ErrorCode::TiltDomain, "tilt: theta is outside the MGF domain of " + dist->family());
  }
  return dist->tilted(theta);
}

DistributionPtr truncate(const DistributionPtr& dist, double u) {
  require(!std::isnan(u), ErrorCode::ParameterDomain, "truncate: level is NaN");
  if (dist->cdf(u) <= 0.0) {
    fail(ErrorCode::EmptyTruncation, "truncate: level lies below the support of " + dist->family());
  }
  if (const auto* emp = dynamic_cast<const EmpiricalDistribution*>(dist.get())) {
    if (u >= emp->max()) return dist;
    const auto data = emp->sorted();
    const auto end = std::upper_bound(data.begin(), data.end(), u);
    return empirical_from(std::vector<double>(data.begin(), end));
  }
  if (const auto* lat = dynamic_cast<const FiniteLatticeDistribution*>(dist.get())) {
    std::vector<double> masses(lat->masses().begin(), lat->masses().end());
    double kept = 0.0;
    for (std::size_t j = 0; j < masses.size(); ++j) {
      if (lat->origin() + lat->spacing() * static_cast<double>(j) > u) masses[j] = 0.0;
      kept += masses[j];
    }
    for (double& m : masses) m /= kept;
    return std::make_shared<FiniteLatticeDistribution>(lat->origin(), lat->spacing(),
                                                       std::move(masses));
  }
  if (const auto* disc = dynamic_cast<const DiscreteDistribution*>(dist.get())) {
    std::vector<double> pts, wts;
    double kept = 0.0;
    for (std::size_t i = 0; i < disc->points().size(); ++i) {
      if (disc->points()[i] > u) break;
      pts.push_back(disc->points()[i]);
      wts.push_back(disc->weights()[i]);
      kept += disc->weights()[i];
    }
    for (double& w : wts) w /= kept;
    return std::make_shared<DiscreteDistribution>(std::move(pts), std::move(wts));
  }
  return std::make_shared<TruncatedDistribution>(dist, u);
}

}  // namespace tailrisk
