#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace tailrisk::experiment {

/// Box-plot summary. Quartiles use linear interpolation between order
/// statistics (position (m-1)q); whiskers reach the most extreme data within
/// 1.5 IQR of the box, and anything beyond is an outlier.
struct BoxStats {
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double whisker_low = 0.0;
  double whisker_high = 0.0;
  std::vector<double> outliers;  // ascending
  std::size_t count = 0;

  double iqr() const { return q75 - q25; }
  bool box_covers(double x) const { return q25 <= x && x <= q75; }
  nlohmann::json to_json() const;
};

/// Linear-interpolation quantile of sorted data.
double sorted_quantile(std::span<const double> sorted, double q);

/// Throws EmptyData on empty input; NaNs are rejected.
BoxStats box_stats(std::span<const double> values);

}  // namespace tailrisk::experiment
