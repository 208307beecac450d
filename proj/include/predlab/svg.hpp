#pragma once

#include <string>
#include <vector>

namespace predlab {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

/// Polyline plot with axes. Non-positive values are dropped on log axes.
std::string svg_plot(const std::vector<PlotSeries>& series, const std::string& title, const std::string& x_label,
                     const std::string& y_label, bool log_x, bool log_y);

}  // namespace predlab
