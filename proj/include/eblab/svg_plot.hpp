#pragma once

#include <string>
#include <utility>
#include <vector>

namespace eblab {

struct PlotSeries {
  std::string name;
  std::vector<std::pair<double, double>> points;  // (x, y), both > 0
};

/// Log-log line chart as a standalone SVG document. Points with a
/// nonpositive coordinate cannot be placed on log axes and are dropped.
std::string render_loglog_svg(const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::vector<PlotSeries>& series);

}  // namespace eblab
