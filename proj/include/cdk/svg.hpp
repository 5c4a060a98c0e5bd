#pragma once

#include <string>
#include <vector>

namespace cdk {

// Minimal static SVG line plots; enough for density profiles and kernel
// slices with an optional log10 y axis.
struct SvgSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // interpreted as log10(value) when log_y is set
  std::string color = "#1f77b4";
};

struct SvgPlot {
  std::string title;
  std::string x_label = "x";
  std::string y_label = "y";
  bool log_y = false;
  int width = 760;
  int height = 480;
  std::vector<SvgSeries> series;
};

std::string render_svg(const SvgPlot& plot);
void write_svg(const SvgPlot& plot, const std::string& path);

}  // namespace cdk
