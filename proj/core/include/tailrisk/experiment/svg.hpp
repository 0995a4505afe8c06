#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailrisk/experiment/box_stats.hpp"

namespace tailrisk::experiment {

// Static SVG plots. Output depends only on the arguments, with every number
// printed at fixed precision, so equal inputs give byte-identical files.

struct BoxEntry {
  std::string label;
  BoxStats stats;
};

struct LineSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // NaN breaks the line
};

struct Bar {
  std::string label;
  double value = 0.0;
  double error = 0.0;  // drawn as ±error when > 0
};

std::string box_plot_svg(const std::string& title, const std::vector<BoxEntry>& boxes,
                         const std::string& y_label,
                         std::optional<double> reference = std::nullopt);

std::string line_plot_svg(const std::string& title, const std::vector<LineSeries>& series,
                          const std::string& x_label, const std::string& y_label,
                          std::optional<double> reference = std::nullopt);

std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars,
                          const std::string& y_label);

}  // namespace tailrisk::experiment
