#pragma once

#include <string>
#include <vector>

namespace graphband {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band;  // optional ±band half-width per point (e.g. sd)
  bool markers = false;
};

// Self-contained deterministic SVG line chart: fixed palette, fixed tick
// layout, fixed number formatting, so identical inputs yield identical bytes.
std::string render_chart(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series, int width = 720,
                         int height = 480);

}  // namespace graphband
