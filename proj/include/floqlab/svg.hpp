#pragma once

#include <string>
#include <vector>

namespace floqlab::svg {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal standalone SVG line chart: frame, min/max tick labels, one
// polyline per series and a legend.
std::string line_plot(const std::string& title, const std::string& x_label, const std::string& y_label,
                      const std::vector<Series>& series);

}  // namespace floqlab::svg
