#pragma once

// Minimal static SVG output: enough for log-log curves with overlays, a grid
// heat map, and a scatter plot.  No external renderer.

#include <string>
#include <vector>

namespace su2 {

struct SvgSeries {
  std::vector<double> x, y;
  std::string color = "#1f6fb2";
  double width = 1.5;
  bool dashed = false;
  std::string label;
};

struct SvgPlot {
  std::string title;
  std::string x_label, y_label;
  bool log_x = false, log_y = false;
  std::vector<SvgSeries> series;
  int width = 720, height = 480;
};

std::string render_line_plot(const SvgPlot& plot);

struct SvgHeatMap {
  std::string title;
  std::string x_label, y_label;
  std::vector<double> x_ticks, y_ticks;       // cell center labels
  std::vector<std::vector<double>> values;    // [row][col], NaN = missing
  std::string annotation;                     // footnote under the map
  int width = 720, height = 520;
};

std::string render_heat_map(const SvgHeatMap& map);

struct SvgScatter {
  std::string title;
  std::string x_label, y_label;
  std::vector<double> x, y;
  std::vector<double> hlines;  // horizontal reference lines
  int width = 720, height = 480;
};

std::string render_scatter(const SvgScatter& s);

}  // namespace su2
