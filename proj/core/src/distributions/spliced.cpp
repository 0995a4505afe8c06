#include "tailrisk/distributions/spliced.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tailrisk/errors.hpp"

namespace tailrisk {
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t ceil_rank(double q, std::size_t n) {
  const double r = std::ceil(q * static_cast<double>(n) - 1e-9);
  return std::clamp<std::size_t>(static_cast<std::size_t>(std::max(r, 1.0)), 1, n);
}
}  // namespace

SplicedDistribution::SplicedDistribution(std::vector<double> body, double threshold,
                                         double tail_mass, GpdParams tail)
    : body_(std::move(body)), threshold_(threshold), q_(tail_mass), tail_(tail) {
  require(!body_.empty(), ErrorCode::EmptyData, "spliced: empty body");
  require(q_ > 0.0 && q_ < 1.0, ErrorCode::ParameterDomain, "spliced: tail mass must lie in (0, 1)");
  require(std::isfinite(tail_.shape) && std::isfinite(tail_.scale) && tail_.scale > 0.0,
          ErrorCode::ParameterDomain, "spliced: GPD scale must be > 0");
  std::sort(body_.begin(), body_.end());
  require(body_.back() <= threshold_, ErrorCode::ParameterDomain,
          "spliced: body points must not exceed the threshold");
}

nlohmann::json SplicedDistribution::spec() const {
  return {{"family", family()},
          {"params",
           {{"threshold", threshold_},
            {"tail_mass", q_},
            {"shape", tail_.shape},
            {"scale", tail_.scale},
            {"body_size", body_.size()}}}};
}

double SplicedDistribution::pdf(double x) const {
  if (x > threshold_) return q_ * std::exp(gpd_log_pdf(tail_, x - threshold_));
  const auto [lo, hi] = std::equal_range(body_.begin(), body_.end(), x);
  return (1.0 - q_) * static_cast<double>(hi - lo) / static_cast<double>(body_.size());
}

double SplicedDistribution::cdf(double x) const {
  if (x >= threshold_) return 1.0 - q_ * gpd_sf(tail_, x - threshold_);
  const auto it = std::upper_bound(body_.begin(), body_.end(), x);
  return (1.0 - q_) * static_cast<double>(it - body_.begin()) / static_cast<double>(body_.size());
}

double SplicedDistribution::sf(double x) const {
  if (x >= threshold_) return q_ * gpd_sf(tail_, x - threshold_);
  return 1.0 - cdf(x);
}

double SplicedDistribution::quantile(double p) const {
  if (p <= 0.0) return body_.front();
  if (p <= 1.0 - q_) return body_[ceil_rank(p / (1.0 - q_), body_.size()) - 1];
  if (p >= 1.0) return threshold_ + gpd_upper_endpoint(tail_);
  return threshold_ + gpd_isf(tail_, (1.0 - p) / q_);
}

double SplicedDistribution::mean() const {
  if (tail_.shape >= 1.0) return kInf;
  const double body_mean =
      std::accumulate(body_.begin(), body_.end(), 0.0) / static_cast<double>(body_.size());
  return (1.0 - q_) * body_mean + q_ * (threshold_ + tail_.scale / (1.0 - tail_.shape));
}

double SplicedDistribution::variance() const {
  if (tail_.shape >= 0.5) return kInf;
  double body_m2 = 0.0;
  for (double x : body_) body_m2 += x * x;
  body_m2 /= static_cast<double>(body_.size());
  const double ey = tail_.scale / (1.0 - tail_.shape);
  const double vy = tail_.scale * tail_.scale /
                    ((1.0 - tail_.shape) * (1.0 - tail_.shape) * (1.0 - 2.0 * tail_.shape));
  const double tail_m2 = vy + (threshold_ + ey) * (threshold_ + ey);
  const double m = mean();
  return (1.0 - q_) * body_m2 + q_ * tail_m2 - m * m;
}

double SplicedDistribution::sample(Rng& rng) const {
  if (rng.uniform() < q_) return threshold_ + gpd_isf(tail_, rng.uniform());
  return body_[rng.index(body_.size())];
}

Support SplicedDistribution::support() const {
  return {body_.front(), threshold_ + gpd_upper_endpoint(tail_)};
}

double SplicedDistribution::mgf_domain_sup() const {
  if (tail_.shape > kGpdShapeZero) return 0.0;
  if (tail_.shape < -kGpdShapeZero) return kInf;
  return 1.0 / tail_.scale;
}

double SplicedDistribution::log_mgf(double theta) const {
  if (theta == 0.0) return 0.0;
  fail(ErrorCode::UnsupportedClass, "spliced: log-MGF is not available");
}
double SplicedDistribution::log_mgf_d1(double theta) const {
  if (theta == 0.0) return mean();
  fail(ErrorCode::UnsupportedClass, "spliced: log-MGF is not available");
}
double SplicedDistribution::log_mgf_d2(double theta) const {
  if (theta == 0.0) return variance();
  fail(ErrorCode::UnsupportedClass, "spliced: log-MGF is not available");
}
DistributionPtr SplicedDistribution::tilted(double) const {
  fail(ErrorCode::UnsupportedClass, "spliced: exponential tilting is not available");
}

double tail_threshold(const EmpiricalDistribution& data, double tail_quantile) {
  require(tail_quantile > 0.0 && tail_quantile < 1.0, ErrorCode::ParameterDomain,
          "tail quantile must lie in (0, 1)");
  return data.sorted()[ceil_rank(1.0 - tail_quantile, data.size()) - 1];
}

std::vector<double> tail_excesses(const EmpiricalDistribution& data, double tail_quantile) {
  const double t = tail_threshold(data, tail_quantile);
  const auto sorted = data.sorted();
  const auto first = std::upper_bound(sorted.begin(), sorted.end(), t);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(sorted.end() - first));
  for (auto it = first; it != sorted.end(); ++it) out.push_back(*it - t);
  return out;
}

std::shared_ptr<const SplicedDistribution> splice(const EmpiricalDistribution& body,
                                                  double tail_quantile, const GpdParams& fit) {
  const double t = tail_threshold(body, tail_quantile);
  const auto sorted = body.sorted();
  const auto cut = std::upper_bound(sorted.begin(), sorted.end(), t);
  const auto excess_count = static_cast<std::size_t>(sorted.end() - cut);
  require(excess_count >= kMinTailExcesses, ErrorCode::InsufficientTailData,
          "splice: fewer than 10 excesses above the threshold");
  return std::make_shared<SplicedDistribution>(std::vector<double>(sorted.begin(), cut), t,
                                               body.sf(t), fit);
}

}  // namespace tailrisk
