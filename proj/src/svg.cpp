#include "su2geom/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace su2 {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0, hi = 1;
  bool log = false;

  double map(double v, double pix_lo, double pix_hi) const {
    double t;
    if (log) {
      t = (std::log(v) - std::log(lo)) / (std::log(hi) - std::log(lo));
    } else {
      t = (v - lo) / (hi - lo);
    }
    return pix_lo + t * (pix_hi - pix_lo);
  }

  std::vector<double> ticks() const {
    std::vector<double> t;
    if (log) {
      const int e0 = static_cast<int>(std::ceil(std::log10(lo) - 1e-9));
      const int e1 = static_cast<int>(std::floor(std::log10(hi) + 1e-9));
      for (int e = e0; e <= e1; ++e) t.push_back(std::pow(10.0, e));
      if (t.size() < 2) {
        t = {lo, std::sqrt(lo * hi), hi};
      }
    } else {
      for (int i = 0; i <= 5; ++i) t.push_back(lo + (hi - lo) * i / 5.0);
    }
    return t;
  }
};

std::string header(int w, int h) {
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << w << "\" height=\"" << h
     << "\" fill=\"white\"/>\n";
  return os.str();
}

std::string text_at(double x, double y, const std::string& s, int size = 12,
                    const std::string& anchor = "start") {
  std::ostringstream os;
  os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" font-size=\""
     << size << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
     << "\">" << escape(s) << "</text>\n";
  return os.str();
}

// blue -> yellow -> red
std::string color_scale(double t) {
  t = std::clamp(t, 0.0, 1.0);
  int r, g, b;
  if (t < 0.5) {
    const double u = t / 0.5;
    r = static_cast<int>(40 + u * (250 - 40));
    g = static_cast<int>(90 + u * (220 - 90));
    b = static_cast<int>(170 - u * 120);
  } else {
    const double u = (t - 0.5) / 0.5;
    r = 250;
    g = static_cast<int>(220 - u * 170);
    b = static_cast<int>(50 - u * 10);
  }
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

}  // namespace

std::string render_line_plot(const SvgPlot& plot) {
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double x0 = ml, x1 = plot.width - mr;
  const double y0 = plot.height - mb, y1 = mt;  // y grows downward

  Axis ax, ay;
  ax.log = plot.log_x;
  ay.log = plot.log_y;
  double xlo = std::numeric_limits<double>::infinity(), xhi = 0,
         ylo = std::numeric_limits<double>::infinity(), yhi = 0;
  bool any = false;
  for (const auto& s : plot.series)
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double vx = s.x[i], vy = s.y[i];
      if (!std::isfinite(vx) || !std::isfinite(vy)) continue;
      if (plot.log_x && vx <= 0) continue;
      if (plot.log_y && vy <= 0) continue;
      any = true;
      xlo = std::min(xlo, vx);
      xhi = std::max(xhi, vx);
      ylo = std::min(ylo, vy);
      yhi = std::max(yhi, vy);
    }
  if (!any) {
    xlo = ylo = 0.1;
    xhi = yhi = 1.0;
  }
  if (xlo == xhi) xhi = xlo * (plot.log_x ? 10.0 : 2.0) + 1e-12;
  if (ylo == yhi) yhi = ylo * (plot.log_y ? 10.0 : 2.0) + 1e-12;
  ax.lo = xlo;
  ax.hi = xhi;
  ay.lo = ylo;
  ay.hi = yhi;

  std::ostringstream os;
  os << header(plot.width, plot.height);
  os << text_at(plot.width / 2.0, 22, plot.title, 14, "middle");

  // frame + ticks
  os << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y1) << "\" width=\""
     << fmt(x1 - x0) << "\" height=\"" << fmt(y0 - y1)
     << "\" fill=\"none\" stroke=\"#555\"/>\n";
  for (double t : ax.ticks()) {
    if (t < ax.lo * 0.999 || t > ax.hi * 1.001) continue;
    const double px = ax.map(t, x0, x1);
    os << "<line x1=\"" << fmt(px) << "\" y1=\"" << fmt(y0) << "\" x2=\""
       << fmt(px) << "\" y2=\"" << fmt(y0 + 5) << "\" stroke=\"#555\"/>\n";
    os << text_at(px, y0 + 18, fmt(t), 10, "middle");
  }
  for (double t : ay.ticks()) {
    if (t < ay.lo * 0.999 || t > ay.hi * 1.001) continue;
    const double py = ay.map(t, y0, y1);
    os << "<line x1=\"" << fmt(x0 - 5) << "\" y1=\"" << fmt(py) << "\" x2=\""
       << fmt(x0) << "\" y2=\"" << fmt(py) << "\" stroke=\"#555\"/>\n";
    os << text_at(x0 - 8, py + 4, fmt(t), 10, "end");
  }
  os << text_at((x0 + x1) / 2, plot.height - 12, plot.x_label, 12, "middle");
  os << "<g transform=\"translate(16," << fmt((y0 + y1) / 2)
     << ") rotate(-90)\">" << text_at(0, 0, plot.y_label, 12, "middle")
     << "</g>\n";

  double legend_y = y1 + 14;
  for (const auto& s : plot.series) {
    std::ostringstream pts;
    bool pen_up = true;
    for (size_t i = 0; i < s.x.size(); ++i) {
      const double vx = s.x[i], vy = s.y[i];
      const bool ok = std::isfinite(vx) && std::isfinite(vy) &&
                      (!plot.log_x || vx > 0) && (!plot.log_y || vy > 0);
      if (!ok) {
        pen_up = true;
        continue;
      }
      pts << (pen_up ? "M" : "L") << fmt(ax.map(vx, x0, x1)) << " "
          << fmt(ay.map(vy, y0, y1)) << " ";
      pen_up = false;
    }
    os << "<path d=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
       << "\" stroke-width=\"" << fmt(s.width) << "\""
       << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    if (!s.label.empty()) {
      os << "<line x1=\"" << fmt(x0 + 10) << "\" y1=\"" << fmt(legend_y)
         << "\" x2=\"" << fmt(x0 + 34) << "\" y2=\"" << fmt(legend_y)
         << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
         << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
      os << text_at(x0 + 40, legend_y + 4, s.label, 11);
      legend_y += 16;
    }
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_heat_map(const SvgHeatMap& map) {
  const double ml = 80, mr = 90, mt = 46, mb = 70;
  const int rows = static_cast<int>(map.values.size());
  const int cols = rows ? static_cast<int>(map.values[0].size()) : 0;
  const double x0 = ml, x1 = map.width - mr;
  const double y0 = mt, y1 = map.height - mb;

  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& row : map.values)
    for (double v : row)
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
  if (!std::isfinite(lo)) {
    lo = 0;
    hi = 1;
  }
  if (hi <= lo) hi = lo + 1;

  std::ostringstream os;
  os << header(map.width, map.height);
  os << text_at(map.width / 2.0, 24, map.title, 14, "middle");

  const double cw = (x1 - x0) / std::max(1, cols);
  const double ch = (y1 - y0) / std::max(1, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const double v = map.values[r][c];
      const double px = x0 + c * cw;
      const double py = y0 + r * ch;
      if (std::isfinite(v)) {
        os << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\""
           << fmt(cw) << "\" height=\"" << fmt(ch) << "\" fill=\""
           << color_scale((v - lo) / (hi - lo)) << "\" stroke=\"#888\"/>\n";
        os << text_at(px + cw / 2, py + ch / 2 + 4, fmt(v), 10, "middle");
      } else {
        os << "<rect x=\"" << fmt(px) << "\" y=\"" << fmt(py) << "\" width=\""
           << fmt(cw) << "\" height=\"" << fmt(ch)
           << "\" fill=\"#eee\" stroke=\"#888\"/>\n";
        os << text_at(px + cw / 2, py + ch / 2 + 4, "-", 10, "middle");
      }
    }
  for (int c = 0; c < cols && c < static_cast<int>(map.x_ticks.size()); ++c)
    os << text_at(x0 + (c + 0.5) * cw, y1 + 16, fmt(map.x_ticks[c]), 10,
                  "middle");
  for (int r = 0; r < rows && r < static_cast<int>(map.y_ticks.size()); ++r)
    os << text_at(x0 - 8, y0 + (r + 0.5) * ch + 4, fmt(map.y_ticks[r]), 10,
                  "end");
  os << text_at((x0 + x1) / 2, y1 + 36, map.x_label, 12, "middle");
  os << "<g transform=\"translate(20," << fmt((y0 + y1) / 2)
     << ") rotate(-90)\">" << text_at(0, 0, map.y_label, 12, "middle")
     << "</g>\n";

  // color bar
  const double bx = x1 + 18;
  for (int i = 0; i < 60; ++i) {
    const double t = 1.0 - i / 59.0;
    os << "<rect x=\"" << fmt(bx) << "\" y=\"" << fmt(y0 + i * (y1 - y0) / 60)
       << "\" width=\"14\" height=\"" << fmt((y1 - y0) / 60 + 0.5)
       << "\" fill=\"" << color_scale(t) << "\"/>\n";
  }
  os << text_at(bx + 18, y0 + 8, fmt(hi), 10);
  os << text_at(bx + 18, y1, fmt(lo), 10);
  if (!map.annotation.empty())
    os << text_at((x0 + x1) / 2, y1 + 54, map.annotation, 11, "middle");
  os << "</svg>\n";
  return os.str();
}

std::string render_scatter(const SvgScatter& s) {
  SvgPlot frame;
  frame.title = s.title;
  frame.x_label = s.x_label;
  frame.y_label = s.y_label;
  frame.width = s.width;
  frame.height = s.height;

  // reuse the line-plot frame logic by rendering an empty plot, then append
  // the markers before the closing tag
  SvgSeries span;
  span.color = "none";
  span.width = 0.0;
  for (size_t i = 0; i < s.x.size(); ++i) {
    span.x.push_back(s.x[i]);
    span.y.push_back(s.y[i]);
  }
  for (double h : s.hlines) {
    if (!s.x.empty()) {
      span.y.push_back(h);
      span.x.push_back(s.x[0]);
    }
  }
  frame.series.push_back(span);
  std::string base = render_line_plot(frame);
  base.erase(base.rfind("</svg>"));

  // recompute the axis mapping exactly as render_line_plot does
  const double ml = 70, mr = 20, mt = 40, mb = 55;
  const double x0 = ml, x1 = s.width - mr;
  const double y0 = s.height - mb, y1 = mt;
  double xlo = std::numeric_limits<double>::infinity(), xhi = 0,
         ylo = std::numeric_limits<double>::infinity(), yhi = 0;
  for (size_t i = 0; i < span.x.size(); ++i) {
    xlo = std::min(xlo, span.x[i]);
    xhi = std::max(xhi, span.x[i]);
    ylo = std::min(ylo, span.y[i]);
    yhi = std::max(yhi, span.y[i]);
  }
  if (!std::isfinite(xlo)) {
    xlo = 0;
    xhi = 1;
    ylo = 0;
    yhi = 1;
  }
  if (xlo == xhi) xhi = xlo + 1;
  if (ylo == yhi) yhi = ylo + 1;
  auto mapx = [&](double v) { return x0 + (v - xlo) / (xhi - xlo) * (x1 - x0); };
  auto mapy = [&](double v) { return y0 + (v - ylo) / (yhi - ylo) * (y1 - y0); };

  std::ostringstream os;
  os << base;
  for (double h : s.hlines) {
    os << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(mapy(h)) << "\" x2=\""
       << fmt(x1) << "\" y2=\"" << fmt(mapy(h))
       << "\" stroke=\"#b23b3b\" stroke-dasharray=\"5 4\"/>\n";
  }
  for (size_t i = 0; i < s.x.size(); ++i) {
    os << "<circle cx=\"" << fmt(mapx(s.x[i])) << "\" cy=\""
       << fmt(mapy(s.y[i])) << "\" r=\"4\" fill=\"#1f6fb2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace su2
