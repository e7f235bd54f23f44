#include "graphband/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace graphband {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = 0.0, hi = 1.0;
  void expand(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

}  // namespace

std::string render_chart(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<PlotSeries>& series, int width,
                         int height) {
  if (series.empty()) throw std::invalid_argument("chart needs data");

  bool seeded = false;
  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) {
      throw std::invalid_argument("series x/y size mismatch");
    }
    if (!s.band.empty() && s.band.size() != s.y.size()) {
      throw std::invalid_argument("series band size mismatch");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double b =
          (!s.band.empty() && std::isfinite(s.band[i])) ? s.band[i] : 0.0;
      if (!seeded) {
        xr.lo = xr.hi = s.x[i];
        yr.lo = yr.hi = s.y[i] - b;
        seeded = true;
      }
      xr.expand(s.x[i]);
      yr.expand(s.y[i] - b);
      yr.expand(s.y[i] + b);
    }
  }
  if (!seeded) throw std::invalid_argument("chart needs at least one point");
  if (xr.hi - xr.lo < 1e-12) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (yr.hi - yr.lo < 1e-12) {
    yr.lo -= 0.5;
    yr.hi += 0.5;
  } else {
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;
  }

  const double ml = 70, mr = 18, mt = 40, mb = 52;
  const double pw = width - ml - mr, ph = height - mt - mb;
  auto px = [&](double x) { return ml + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    return mt + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << fmt(width / 2.0) << "\" y=\"22\" font-family=\"sans-serif\""
      << " font-size=\"15\" text-anchor=\"middle\">" << escape_xml(title)
      << "</text>\n";

  // Gridlines and tick labels: five evenly spaced ticks per axis.
  const int ticks = 5;
  for (int i = 0; i < ticks; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / (ticks - 1);
    const double fy = yr.lo + (yr.hi - yr.lo) * i / (ticks - 1);
    const double gx = px(fx), gy = py(fy);
    out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(mt) << "\" x2=\""
        << fmt(gx) << "\" y2=\"" << fmt(mt + ph)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(gy) << "\" x2=\""
        << fmt(ml + pw) << "\" y2=\"" << fmt(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(mt + ph + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" "
           "text-anchor=\"middle\">"
        << fmt(fx, "%.4g") << "</text>\n";
    out << "<text x=\"" << fmt(ml - 8) << "\" y=\"" << fmt(gy + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << fmt(fy, "%.4g") << "</text>\n";
  }
  out << "<rect x=\"" << fmt(ml) << "\" y=\"" << fmt(mt) << "\" width=\""
      << fmt(pw) << "\" height=\"" << fmt(ph)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << fmt(ml + pw / 2) << "\" y=\"" << fmt(height - 12.0)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << escape_xml(x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << fmt(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << fmt(mt + ph / 2) << ")\">" << escape_xml(y_label) << "</text>\n";

  // ±band polygons first so the lines stay on top.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.band.empty()) continue;
    bool any = false;
    for (double b : s.band) any = any || (std::isfinite(b) && b > 0.0);
    if (!any) continue;
    const char* color = kPalette[si % kPaletteSize];
    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
        << "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double b = std::isfinite(s.band[i]) ? s.band[i] : 0.0;
      out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i] + b)) << " ";
    }
    for (std::size_t i = s.x.size(); i > 0; --i) {
      const double b = std::isfinite(s.band[i - 1]) ? s.band[i - 1] : 0.0;
      out << fmt(px(s.x[i - 1])) << "," << fmt(py(s.y[i - 1] - b));
      if (i > 1) out << " ";
    }
    out << "\"/>\n";
  }

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out << " ";
      out << fmt(px(s.x[i])) << "," << fmt(py(s.y[i]));
    }
    out << "\"/>\n";
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        out << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\""
            << fmt(py(s.y[i])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
  }

  // Legend, top-right inside the plot area.
  const double lx = ml + pw - 170, ly0 = mt + 12;
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = ly0 + 18.0 * si;
    const char* color = kPalette[si % kPaletteSize];
    out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(lx + 22) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << fmt(lx + 28) << "\" y=\"" << fmt(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(series[si].label) << "</text>\n";
  }

  out << "</svg>\n";
  return out.str();
}

}  // namespace graphband
