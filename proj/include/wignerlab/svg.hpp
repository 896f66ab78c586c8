#ifndef WIGNERLAB_SVG_HPP
#define WIGNERLAB_SVG_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "wignerlab/format.hpp"

// Hand-rolled SVG plots. Output is a pure function of the input data, so
// rerunning a plot command reproduces the file byte for byte.

namespace wignerlab {

struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f6feb";
  bool line = true;
  bool markers = true;
};

// A straight guide in log-log space: passes through (x0, y0) with the given
// slope d(log y)/d(log x). slope_text is stamped on the element as
// data-guide-slope so plots stay machine-checkable.
struct PlotGuide {
  double slope = 0.0;
  double x0 = 1.0;
  double y0 = 1.0;
  std::string slope_text;
  std::string label;
  std::string color = "#808080";
};

namespace detail {

// Pixel coordinates with two decimals: compact and deterministic.
inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
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

struct Frame {
  double width = 720, height = 480;
  double ml = 78, mr = 24, mt = 46, mb = 58;
  double plot_w() const { return width - ml - mr; }
  double plot_h() const { return height - mt - mb; }
};

struct Range {
  double lo = 0, hi = 1;
  void pad(double frac) {
    if (hi <= lo) {
      lo -= 0.5;
      hi += 0.5;
      return;
    }
    const double d = (hi - lo) * frac;
    lo -= d;
    hi += d;
  }
};

inline double nice_step(double raw) {
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  if (r <= 1.0) return mag;
  if (r <= 2.0) return 2.0 * mag;
  if (r <= 5.0) return 5.0 * mag;
  return 10.0 * mag;
}

inline std::string tick_label(double v) {
  // Snap near-integers so linear ticks read "4" rather than
  // "4.000000000000001".
  const double r = std::round(v);
  if (std::abs(v - r) < 1e-9 * std::max(1.0, std::abs(v))) v = r;
  return format_double(v);
}

}  // namespace detail

class SvgPlot {
 public:
  SvgPlot(std::string title, std::string xlabel, std::string ylabel,
          bool logx, bool logy)
      : title_(std::move(title)),
        xlabel_(std::move(xlabel)),
        ylabel_(std::move(ylabel)),
        logx_(logx),
        logy_(logy) {}

  void add(PlotSeries s) { series_.push_back(std::move(s)); }
  void add_guide(PlotGuide g) { guides_.push_back(std::move(g)); }

  std::string render() const {
    detail::Range rx, ry;
    bool first = true;
    for (const PlotSeries& s : series_)
      for (const auto& [x, y] : s.points) {
        const double tx = tx_(x), ty = ty_(y);
        if (first) {
          rx = {tx, tx};
          ry = {ty, ty};
          first = false;
        } else {
          rx.lo = std::min(rx.lo, tx);
          rx.hi = std::max(rx.hi, tx);
          ry.lo = std::min(ry.lo, ty);
          ry.hi = std::max(ry.hi, ty);
        }
      }
    if (first) throw std::runtime_error("plot has no data points");
    rx.pad(0.06);
    ry.pad(0.08);

    const detail::Frame f;
    auto X = [&](double x) {
      return f.ml + (tx_(x) - rx.lo) / (rx.hi - rx.lo) * f.plot_w();
    };
    auto Y = [&](double y) {
      return f.mt + (ry.hi - ty_(y)) / (ry.hi - ry.lo) * f.plot_h();
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           detail::px(f.width) + "\" height=\"" + detail::px(f.height) +
           "\" viewBox=\"0 0 " + detail::px(f.width) + " " +
           detail::px(f.height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    out += "<text x=\"" + detail::px(f.width / 2) + "\" y=\"26\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\">" +
           detail::xml_escape(title_) + "</text>\n";

    render_axes(out, f, rx, ry, X, Y);

    for (const PlotGuide& g : guides_) {
      // Guides are linear in transformed coordinates; clip to the x-range.
      const double t0 = rx.lo + 0.02 * (rx.hi - rx.lo);
      const double t1 = rx.hi - 0.02 * (rx.hi - rx.lo);
      const double u0 = ty_(g.y0) + g.slope * (t0 - tx_(g.x0));
      const double u1 = ty_(g.y0) + g.slope * (t1 - tx_(g.x0));
      const double px0 = f.ml + (t0 - rx.lo) / (rx.hi - rx.lo) * f.plot_w();
      const double px1 = f.ml + (t1 - rx.lo) / (rx.hi - rx.lo) * f.plot_w();
      const double py0 = f.mt + (ry.hi - u0) / (ry.hi - ry.lo) * f.plot_h();
      const double py1 = f.mt + (ry.hi - u1) / (ry.hi - ry.lo) * f.plot_h();
      out += "<line x1=\"" + detail::px(px0) + "\" y1=\"" + detail::px(py0) +
             "\" x2=\"" + detail::px(px1) + "\" y2=\"" + detail::px(py1) +
             "\" stroke=\"" + g.color +
             "\" stroke-width=\"1.2\" stroke-dasharray=\"6 4\"" +
             (g.slope_text.empty()
                  ? std::string()
                  : " data-guide-slope=\"" + detail::xml_escape(g.slope_text) +
                        "\"") +
             "/>\n";
      if (!g.label.empty())
        out += "<text x=\"" + detail::px(px1 - 4) + "\" y=\"" +
               detail::px(py1 - 6) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\" fill=\"" +
               g.color + "\">" + detail::xml_escape(g.label) + "</text>\n";
    }

    for (const PlotSeries& s : series_) {
      if (s.line && s.points.size() > 1) {
        out += "<polyline fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.6\" data-series=\"" +
               detail::xml_escape(s.label) + "\" points=\"";
        for (std::size_t i = 0; i < s.points.size(); ++i) {
          if (i) out += ' ';
          out += detail::px(X(s.points[i].first)) + "," +
                 detail::px(Y(s.points[i].second));
        }
        out += "\"/>\n";
      }
      if (s.markers) {
        // group the circles so marker-only series stay addressable by label
        out += "<g data-series=\"" + detail::xml_escape(s.label) + "\">\n";
        for (const auto& [x, y] : s.points)
          out += "<circle cx=\"" + detail::px(X(x)) + "\" cy=\"" +
                 detail::px(Y(y)) + "\" r=\"3\" fill=\"" + s.color + "\"/>\n";
        out += "</g>\n";
      }
    }

    // Legend, top right of the plot area.
    double ly = f.mt + 16;
    for (const PlotSeries& s : series_) {
      const double lx = f.width - f.mr - 10;
      out += "<rect x=\"" + detail::px(lx - 150) + "\" y=\"" +
             detail::px(ly - 9) +
             "\" width=\"14\" height=\"4\" fill=\"" + s.color + "\"/>\n";
      out += "<text x=\"" + detail::px(lx - 132) + "\" y=\"" + detail::px(ly) +
             "\" font-family=\"sans-serif\" font-size=\"12\">" +
             detail::xml_escape(s.label) + "</text>\n";
      ly += 18;
    }

    out += "</svg>\n";
    return out;
  }

 private:
  double tx_(double x) const { return logx_ ? std::log10(x) : x; }
  double ty_(double y) const { return logy_ ? std::log10(y) : y; }

  template <typename FX, typename FY>
  void render_axes(std::string& out, const detail::Frame& f,
                   const detail::Range& rx, const detail::Range& ry, FX X,
                   FY Y) const {
    const double x0 = f.ml, x1 = f.width - f.mr;
    const double y0 = f.mt, y1 = f.height - f.mb;
    out += "<rect x=\"" + detail::px(x0) + "\" y=\"" + detail::px(y0) +
           "\" width=\"" + detail::px(x1 - x0) + "\" height=\"" +
           detail::px(y1 - y0) +
           "\" fill=\"none\" stroke=\"#303030\" stroke-width=\"1\"/>\n";

    auto x_tick = [&](double v, const std::string& label) {
      const double p = X(v);
      if (p < x0 - 0.5 || p > x1 + 0.5) return;
      out += "<line x1=\"" + detail::px(p) + "\" y1=\"" + detail::px(y1) +
             "\" x2=\"" + detail::px(p) + "\" y2=\"" + detail::px(y1 + 5) +
             "\" stroke=\"#303030\"/>\n";
      out += "<text x=\"" + detail::px(p) + "\" y=\"" + detail::px(y1 + 19) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"11\">" +
             detail::xml_escape(label) + "</text>\n";
    };
    auto y_tick = [&](double v, const std::string& label) {
      const double p = Y(v);
      if (p < y0 - 0.5 || p > y1 + 0.5) return;
      out += "<line x1=\"" + detail::px(x0 - 5) + "\" y1=\"" + detail::px(p) +
             "\" x2=\"" + detail::px(x0) + "\" y2=\"" + detail::px(p) +
             "\" stroke=\"#303030\"/>\n";
      out += "<text x=\"" + detail::px(x0 - 8) + "\" y=\"" +
             detail::px(p + 4) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"11\">" +
             detail::xml_escape(label) + "</text>\n";
    };

    if (logx_) {
      for (int k = (int)std::ceil(rx.lo); k <= (int)std::floor(rx.hi); ++k)
        x_tick(std::pow(10.0, k), "1e" + std::to_string(k));
    } else {
      const double step = detail::nice_step((rx.hi - rx.lo) / 5.0);
      for (double v = std::ceil(rx.lo / step) * step; v <= rx.hi + step * 1e-9;
           v += step)
        x_tick(v, detail::tick_label(v));
    }
    if (logy_) {
      for (int k = (int)std::ceil(ry.lo); k <= (int)std::floor(ry.hi); ++k)
        y_tick(std::pow(10.0, k), "1e" + std::to_string(k));
    } else {
      const double step = detail::nice_step((ry.hi - ry.lo) / 5.0);
      for (double v = std::ceil(ry.lo / step) * step; v <= ry.hi + step * 1e-9;
           v += step)
        y_tick(v, detail::tick_label(v));
    }

    out += "<text x=\"" + detail::px((x0 + x1) / 2) + "\" y=\"" +
           detail::px(f.height - 14) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\">" +
           detail::xml_escape(xlabel_) + "</text>\n";
    out += "<text x=\"20\" y=\"" + detail::px((y0 + y1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" transform=\"rotate(-90 20 " +
           detail::px((y0 + y1) / 2) + ")\">" + detail::xml_escape(ylabel_) +
           "</text>\n";
  }

  std::string title_, xlabel_, ylabel_;
  bool logx_, logy_;
  std::vector<PlotSeries> series_;
  std::vector<PlotGuide> guides_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace wignerlab

#endif
