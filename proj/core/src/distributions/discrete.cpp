#include "tailrisk/distributions/discrete.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tailrisk/errors.hpp"

namespace tailrisk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Normalized weights proportional to w_i exp(θ x_i), computed in log space.
std::vector<double> reweight(std::span<const double> points, std::span<const double> weights,
                             double theta) {
  std::vector<double> logw(points.size());
  double top = -kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    logw[i] = weights[i] > 0.0 ? std::log(weights[i]) + theta * points[i] : -kInf;
    top = std::max(top, logw[i]);
  }
  double total = 0.0;
  for (double& v : logw) {
    v = std::exp(v - top);
    total += v;
  }
  for (double& v : logw) v /= total;
  return logw;
}

double weighted_log_mgf(std::span<const double> points, std::span<const double> weights,
                        double theta) {
  double top = -kInf;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] > 0.0) top = std::max(top, std::log(weights[i]) + theta * points[i]);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (weights[i] > 0.0) total += std::exp(std::log(weights[i]) + theta * points[i] - top);
  }
  return top + std::log(total);
}

struct MeanVar {
  double mean;
  double variance;
};

MeanVar weighted_moments(std::span<const double> points, std::span<const double> weights) {
  double m = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) m += weights[i] * points[i];
  double v = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = points[i] - m;
    v += weights[i] * d * d;
  }
  return {m, v};
}

std::size_t ceil_rank(double q, std::size_t n) {
  const double r = std::ceil(q * static_cast<double>(n) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(r, 1.0)), 1, n);
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(std::vector<double> points, std::vector<double> weights) {
  require(!points.empty(), ErrorCode::EmptyData, "discrete: no atoms");
  require(points.size() == weights.size(), ErrorCode::ParameterDomain,
          "discrete: points and weights differ in length");
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });
  double total = 0.0;
  for (std::size_t i : order) {
    require(std::isfinite(points[i]), ErrorCode::ParameterDomain, "discrete: non-finite atom");
    require(std::isfinite(weights[i]) && weights[i] >= 0.0, ErrorCode::ParameterDomain,
            "discrete: weights must be nonnegative");
    total += weights[i];
    if (weights[i] == 0.0) continue;
    if (!points_.empty() && points_.back() == points[i]) {
      weights_.back() += weights[i];
    } else {
      points_.push_back(points[i]);
      weights_.push_back(weights[i]);
    }
  }
  require(std::abs(total - 1.0) <= 1e-9, ErrorCode::ParameterDomain,
          "discrete: weights must sum to 1");
  for (double& w : weights_) w /= total;
  cumulative_.resize(weights_.size());
  tail_.resize(weights_.size());
  std::partial_sum(weights_.begin(), weights_.end(), cumulative_.begin());
  double acc = 0.0;
  for (std::size_t i = weights_.size(); i-- > 0;) {
    acc += weights_[i];
    tail_[i] = acc;
  }
}

nlohmann::json DiscreteDistribution::spec() const {
  return {{"family", "discrete"}, {"params", {{"points", points_}, {"weights", weights_}}}};
}

double DiscreteDistribution::pdf(double x) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), x);
  return (it != points_.end() && *it == x) ? weights_[it - points_.begin()] : 0.0;
}

double DiscreteDistribution::cdf(double x) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  if (it == points_.begin()) return 0.0;
  if (it == points_.end()) return 1.0;
  return 1.0 - tail_[it - points_.begin()];
}

double DiscreteDistribution::sf(double x) const {
  const auto it = std::upper_bound(points_.begin(), points_.end(), x);
  return it == points_.end() ? 0.0 : tail_[it - points_.begin()];
}

double DiscreteDistribution::quantile(double q) const {
  if (q <= 0.0) return points_.front();
  const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), q - 1e-15);
  return it == cumulative_.end() ? points_.back() : points_[it - cumulative_.begin()];
}

double DiscreteDistribution::mean() const { return weighted_moments(points_, weights_).mean; }
double DiscreteDistribution::variance() const {
  return weighted_moments(points_, weights_).variance;
}

double DiscreteDistribution::sample(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return it == cumulative_.end() ? points_.back() : points_[it - cumulative_.begin()];
}

Support DiscreteDistribution::support() const { return {points_.front(), points_.back()}; }
double DiscreteDistribution::mgf_domain_sup() const { return kInf; }

double DiscreteDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  return weighted_log_mgf(points_, weights_, theta);
}
double DiscreteDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  return weighted_moments(points_, tilted_weights(theta)).mean;
}
double DiscreteDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  return weighted_moments(points_, tilted_weights(theta)).variance;
}

std::vector<double> DiscreteDistribution::tilted_weights(double theta) const {
  return reweight(points_, weights_, theta);
}

DistributionPtr DiscreteDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  return std::make_shared<DiscreteDistribution>(points_, tilted_weights(theta));
}

// ---------------------------------------------------------------------------
// FiniteLatticeDistribution

namespace {
std::vector<double> lattice_points(double origin, double spacing, std::size_t count) {
  std::vector<double> pts(count);
  for (std::size_t j = 0; j < count; ++j) pts[j] = origin + spacing * static_cast<double>(j);
  return pts;
}
}  // namespace

FiniteLatticeDistribution::FiniteLatticeDistribution(double origin, double spacing,
                                                     std::vector<double> masses)
    : DiscreteDistribution(
          (require(std::isfinite(spacing) && spacing > 0.0, ErrorCode::ParameterDomain,
                   "finite_lattice: spacing must be > 0"),
           lattice_points(origin, spacing, masses.size())),
          masses),
      origin_(origin),
      spacing_(spacing),
      masses_(std::move(masses)) {}

nlohmann::json FiniteLatticeDistribution::spec() const {
  return {{"family", family()},
          {"params", {{"origin", origin_}, {"spacing", spacing_}, {"masses", masses_}}}};
}

std::optional<double> FiniteLatticeDistribution::lattice_span() const {
  std::size_t first = masses_.size();
  std::size_t g = 0;
  for (std::size_t j = 0; j < masses_.size(); ++j) {
    if (masses_[j] <= 0.0) continue;
    if (first == masses_.size()) {
      first = j;
    } else {
      g = std::gcd(g, j - first);
    }
  }
  return spacing_ * static_cast<double>(g == 0 ? 1 : g);
}

DistributionPtr FiniteLatticeDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  const auto pts = lattice_points(origin_, spacing_, masses_.size());
  return std::make_shared<FiniteLatticeDistribution>(origin_, spacing_,
                                                     reweight(pts, masses_, theta));
}

// ---------------------------------------------------------------------------
// EmpiricalDistribution

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : data_(std::move(samples)) {
  require(!data_.empty(), ErrorCode::EmptyData, "empirical: no samples");
  for (double x : data_) {
    require(std::isfinite(x), ErrorCode::ParameterDomain, "empirical: non-finite sample");
  }
  std::sort(data_.begin(), data_.end());
  mean_ = std::accumulate(data_.begin(), data_.end(), 0.0) / static_cast<double>(data_.size());
}

nlohmann::json EmpiricalDistribution::spec() const {
  return {{"family", family()}, {"params", {{"data", data_}}}};
}

double EmpiricalDistribution::pdf(double x) const {
  const auto [lo, hi] = std::equal_range(data_.begin(), data_.end(), x);
  return static_cast<double>(hi - lo) / static_cast<double>(data_.size());
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(data_.begin(), data_.end(), x);
  return static_cast<double>(it - data_.begin()) / static_cast<double>(data_.size());
}

double EmpiricalDistribution::sf(double x) const {
  const auto it = std::upper_bound(data_.begin(), data_.end(), x);
  return static_cast<double>(data_.end() - it) / static_cast<double>(data_.size());
}

double EmpiricalDistribution::quantile(double q) const {
  if (q <= 0.0) return data_.front();
  return data_[ceil_rank(q, data_.size()) - 1];
}

double EmpiricalDistribution::variance() const {
  double v = 0.0;
  for (double x : data_) v += (x - mean_) * (x - mean_);
  return v / static_cast<double>(data_.size());
}

double EmpiricalDistribution::mgf_domain_sup() const { return kInf; }

double EmpiricalDistribution::log_mgf(double theta) const {
  check_mgf_domain(theta);
  // Equal weights: log mean exp(θx), anchored at the largest exponent.
  const double top = theta >= 0.0 ? theta * data_.back() : theta * data_.front();
  double total = 0.0;
  for (double x : data_) total += std::exp(theta * x - top);
  return top + std::log(total / static_cast<double>(data_.size()));
}

double EmpiricalDistribution::log_mgf_d1(double theta) const {
  check_mgf_domain(theta);
  const double top = theta >= 0.0 ? theta * data_.back() : theta * data_.front();
  double s0 = 0.0, s1 = 0.0;
  for (double x : data_) {
    const double w = std::exp(theta * x - top);
    s0 += w;
    s1 += w * x;
  }
  return s1 / s0;
}

double EmpiricalDistribution::log_mgf_d2(double theta) const {
  check_mgf_domain(theta);
  const double m = log_mgf_d1(theta);
  const double top = theta >= 0.0 ? theta * data_.back() : theta * data_.front();
  double s0 = 0.0, s2 = 0.0;
  for (double x : data_) {
    const double w = std::exp(theta * x - top);
    s0 += w;
    s2 += w * (x - m) * (x - m);
  }
  return s2 / s0;
}

DistributionPtr EmpiricalDistribution::tilted(double theta) const {
  check_mgf_domain(theta);
  const std::vector<double> w(data_.size(), 1.0 / static_cast<double>(data_.size()));
  return std::make_shared<DiscreteDistribution>(data_, reweight(data_, w, theta));
}

std::shared_ptr<const EmpiricalDistribution> empirical_from(std::vector<double> samples) {
  return std::make_shared<EmpiricalDistribution>(std::move(samples));
}

}  // namespace tailrisk
