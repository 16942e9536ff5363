#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace rovib::io {

// Minimal deterministic plotter: axes, tick labels, point markers or
// polylines. Enough to eyeball sections, time series and phase portraits;
// anything fancier belongs in an external tool fed from the CSVs.
struct Series {
  std::string label;
  std::string color = "#1f6fb2";
  bool line = true;  // false draws point markers
  std::vector<std::pair<double, double>> points;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 900;
  int height = 640;
};

void write_svg_plot(const std::filesystem::path& file, const PlotSpec& spec,
                    std::span<const Series> series);

}  // namespace rovib::io
