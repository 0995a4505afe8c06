#include "tailrisk/experiment/box_stats.hpp"

#include <algorithm>
#include <cmath>

#include "tailrisk/errors.hpp"

namespace tailrisk::experiment {

nlohmann::json BoxStats::to_json() const {
  return {{"median", median},
          {"q25", q25},
          {"q75", q75},
          {"whisker_low", whisker_low},
          {"whisker_high", whisker_high},
          {"outliers", outliers},
          {"count", count}};
}

double sorted_quantile(std::span<const double> sorted, double q) {
  require(!sorted.empty(), ErrorCode::EmptyData, "quantile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::span<const double> values) {
  require(!values.empty(), ErrorCode::EmptyData, "box_stats: no values");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) require(!std::isnan(x), ErrorCode::ParameterDomain, "box_stats: NaN value");
  std::sort(v.begin(), v.end());
  BoxStats s;
  s.count = v.size();
  s.median = sorted_quantile(v, 0.5);
  s.q25 = sorted_quantile(v, 0.25);
  s.q75 = sorted_quantile(v, 0.75);
  const double reach = 1.5 * s.iqr();
  const double lo_fence = s.q25 - reach;
  const double hi_fence = s.q75 + reach;
  s.whisker_low = s.q25;
  s.whisker_high = s.q75;
  for (double x : v) {
    if (x < lo_fence || x > hi_fence) {
      s.outliers.push_back(x);
      continue;
    }
    s.whisker_low = std::min(s.whisker_low, x);
    s.whisker_high = std::max(s.whisker_high, x);
  }
  return s;
}

}  // namespace tailrisk::experiment
