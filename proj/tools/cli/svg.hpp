#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace mirl::cli {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;  ///< non-finite values break the line
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  double width = 640.0;
  double height = 420.0;
};

/// Standalone SVG: frame, ticks, one polyline per finite run of each
/// series, legend in the top-right corner.
std::string render_svg(const LinePlot& plot);

void write_svg(const std::filesystem::path& path, const LinePlot& plot);

/// Roughly `target` round-valued ticks covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target = 5);

}  // namespace mirl::cli
