#pragma once

#include <string>
#include <vector>

namespace nlkpp {

// Minimal self-contained SVG line charts (no external renderer). Non-finite
// samples break the polyline. Log axes apply log10 to the data and label the
// ticks with the original values.
struct SvgSeries {
  std::string label;
  std::string color = "#1f6fb2";
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgChart {
  std::string title;
  std::string x_label = "t";
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 760;
  int height = 420;
  std::vector<SvgSeries> series;
};

std::string render_svg(const SvgChart& chart);

}  // namespace nlkpp
