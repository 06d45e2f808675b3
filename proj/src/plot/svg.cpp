#include "smpred/plot/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "smpred/common/error.hpp"

namespace smpred {

namespace {

std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

// 1-2-5 tick spacing covering [lo, hi] with ~n ticks.
std::vector<double> linear_ticks(double lo, double hi, int n = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / n;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double mult : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * mult >= raw) {
      step = mag * mult;
      break;
    }
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + step * 1e-9; t += step)
    ticks.push_back(t);
  return ticks;
}

std::string tick_label(double v) {
  char buf[32];
  if (v == 0.0) return "0";
  const double a = std::abs(v);
  if (a >= 1e4 || a < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.0e", v);
  } else {
    std::snprintf(buf, sizeof(buf), "%g", v);
  }
  return buf;
}

}  // namespace

SvgWriter::SvgWriter(double width, double height) : width_(width), height_(height) {}

void SvgWriter::line(double x1, double y1, double x2, double y2, const std::string& stroke,
                     double stroke_width) {
  body_ += "<line x1=\"" + px(x1) + "\" y1=\"" + px(y1) + "\" x2=\"" + px(x2) + "\" y2=\"" +
           px(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" + px(stroke_width) +
           "\"/>\n";
}

void SvgWriter::polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& stroke, double stroke_width) {
  if (xs.empty()) return;
  body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" +
           px(stroke_width) + "\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) body_ += ' ';
    body_ += px(xs[i]) + "," + px(ys[i]);
  }
  body_ += "\"/>\n";
}

void SvgWriter::polygon(const std::vector<double>& xs, const std::vector<double>& ys,
                        const std::string& fill, double opacity) {
  if (xs.empty()) return;
  body_ += "<polygon fill=\"" + fill + "\" fill-opacity=\"" + px(opacity) +
           "\" stroke=\"none\" points=\"";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) body_ += ' ';
    body_ += px(xs[i]) + "," + px(ys[i]);
  }
  body_ += "\"/>\n";
}

void SvgWriter::circle(double cx, double cy, double r, const std::string& fill,
                       const std::string& stroke, double opacity) {
  body_ += "<circle cx=\"" + px(cx) + "\" cy=\"" + px(cy) + "\" r=\"" + px(r) + "\" fill=\"" +
           fill + "\" stroke=\"" + stroke + "\" fill-opacity=\"" + px(opacity) + "\"/>\n";
}

void SvgWriter::rect(double x, double y, double w, double h, const std::string& fill,
                     const std::string& stroke) {
  body_ += "<rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) + "\" height=\"" +
           px(h) + "\" fill=\"" + fill + "\" stroke=\"" + stroke + "\"/>\n";
}

void SvgWriter::text(double x, double y, const std::string& s, double size,
                     const std::string& anchor, const std::string& fill) {
  body_ += "<text x=\"" + px(x) + "\" y=\"" + px(y) + "\" font-family=\"sans-serif\" font-size=\"" +
           px(size) + "\" text-anchor=\"" + anchor + "\" fill=\"" + fill + "\">" + s +
           "</text>\n";
}

std::string SvgWriter::str() const {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width_) + "\" height=\"" +
         px(height_) + "\" viewBox=\"0 0 " + px(width_) + " " + px(height_) +
         "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n" + body_ + "</svg>\n";
}

void SvgWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << str();
  if (!out) throw IoError("write failed: " + path.string());
}

LineChart::LineChart(std::string title, std::string x_label, std::string y_label, bool log_y)
    : title_(std::move(title)),
      x_label_(std::move(x_label)),
      y_label_(std::move(y_label)),
      log_y_(log_y) {}

void LineChart::add(Series series) { series_.push_back(std::move(series)); }

void LineChart::render(const std::filesystem::path& path) const {
  constexpr double kW = 640, kH = 420;
  constexpr double kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  constexpr double kLogFloor = 1e-12;  // log axis guard for zero losses

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  auto consider_y = [&](double v) {
    const double y = log_y_ ? std::log10(std::max(v, kLogFloor)) : v;
    y_min = std::min(y_min, y);
    y_max = std::max(y_max, y);
  };
  for (const Series& s : series_) {
    for (double v : s.x) {
      x_min = std::min(x_min, v);
      x_max = std::max(x_max, v);
    }
    for (double v : s.y) consider_y(v);
    for (double v : s.band_lo) consider_y(v);
    for (double v : s.band_hi) consider_y(v);
  }
  if (!(x_max > x_min)) x_max = x_min + 1.0;
  if (!(y_max > y_min)) y_max = y_min + 1.0;
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto sx = [&](double v) { return kLeft + (v - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double v) {
    const double y = log_y_ ? std::log10(std::max(v, kLogFloor)) : v;
    return kTop + (1.0 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  SvgWriter svg(kW, kH);
  svg.rect(kLeft, kTop, plot_w, plot_h, "none", "#888888");

  if (log_y_) {
    for (int e = static_cast<int>(std::ceil(y_min)); e <= static_cast<int>(std::floor(y_max));
         ++e) {
      const double y = kTop + (1.0 - (e - y_min) / (y_max - y_min)) * plot_h;
      svg.line(kLeft, y, kLeft + plot_w, y, "#e5e5e5");
      char label[24];
      std::snprintf(label, sizeof(label), "1e%d", e);
      svg.text(kLeft - 8, y + 4, label, 11, "end");
    }
  } else {
    for (double t : linear_ticks(y_min, y_max)) {
      const double y = kTop + (1.0 - (t - y_min) / (y_max - y_min)) * plot_h;
      svg.line(kLeft, y, kLeft + plot_w, y, "#e5e5e5");
      svg.text(kLeft - 8, y + 4, tick_label(t), 11, "end");
    }
  }
  for (double t : linear_ticks(x_min, x_max)) {
    const double x = sx(t);
    svg.line(x, kTop + plot_h, x, kTop + plot_h + 4, "#888888");
    svg.text(x, kTop + plot_h + 18, tick_label(t), 11, "middle");
  }

  for (const Series& s : series_) {
    if (!s.band_lo.empty() && s.band_lo.size() == s.x.size() &&
        s.band_hi.size() == s.x.size()) {
      std::vector<double> xs, ys;
      xs.reserve(2 * s.x.size());
      ys.reserve(2 * s.x.size());
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        xs.push_back(sx(s.x[i]));
        ys.push_back(sy(s.band_hi[i]));
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        xs.push_back(sx(s.x[i]));
        ys.push_back(sy(s.band_lo[i]));
      }
      svg.polygon(xs, ys, s.color, 0.18);
    }
    std::vector<double> xs, ys;
    xs.reserve(s.x.size());
    ys.reserve(s.x.size());
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xs.push_back(sx(s.x[i]));
      ys.push_back(sy(s.y[i]));
    }
    svg.polyline(xs, ys, s.color);
  }

  svg.text(kW / 2, 22, title_, 14, "middle");
  svg.text(kW / 2, kH - 12, x_label_, 12, "middle");
  svg.text(16, kTop - 12, y_label_, 12, "start");

  double ly = kTop + 12;
  for (const Series& s : series_) {
    if (s.label.empty()) continue;
    svg.line(kLeft + plot_w - 120, ly - 4, kLeft + plot_w - 100, ly - 4, s.color, 2.0);
    svg.text(kLeft + plot_w - 94, ly, s.label, 11);
    ly += 16;
  }
  svg.write(path);
}

void ScatterPanel::add(ScatterGroup group) { groups_.push_back(std::move(group)); }

void ScatterPanel::connect(const std::vector<double>& x1, const std::vector<double>& y1,
                           const std::vector<double>& x2, const std::vector<double>& y2,
                           const std::string& color) {
  connectors_.push_back({x1, y1, x2, y2, color});
}

void ScatterPanel::draw(SvgWriter& svg, double ox, double oy, double size) const {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  auto consider = [&](double x, double y) {
    lo_x = std::min(lo_x, x);
    hi_x = std::max(hi_x, x);
    lo_y = std::min(lo_y, y);
    hi_y = std::max(hi_y, y);
  };
  for (const ScatterGroup& g : groups_)
    for (std::size_t i = 0; i < g.x.size(); ++i) consider(g.x[i], g.y[i]);
  if (!(hi_x > lo_x)) hi_x = lo_x + 1.0;
  if (!(hi_y > lo_y)) hi_y = lo_y + 1.0;
  // Equal aspect: pad the smaller extent.
  const double span = std::max(hi_x - lo_x, hi_y - lo_y) * 1.1;
  const double cx = (lo_x + hi_x) / 2.0, cy = (lo_y + hi_y) / 2.0;
  const double margin = 26.0;
  const double inner = size - 2 * margin;
  auto sx = [&](double v) { return ox + margin + ((v - cx) / span + 0.5) * inner; };
  auto sy = [&](double v) { return oy + margin + (0.5 - (v - cy) / span) * inner; };

  svg.rect(ox + margin, oy + margin, inner, inner, "none", "#bbbbbb");
  for (const Connector& c : connectors_)
    for (std::size_t i = 0; i < c.x1.size(); ++i)
      svg.line(sx(c.x1[i]), sy(c.y1[i]), sx(c.x2[i]), sy(c.y2[i]), c.color, 0.8);
  for (const ScatterGroup& g : groups_) {
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      if (g.filled)
        svg.circle(sx(g.x[i]), sy(g.y[i]), g.radius, g.color);
      else
        svg.circle(sx(g.x[i]), sy(g.y[i]), g.radius, "none", g.color);
    }
  }
  svg.text(ox + size / 2, oy + 16, title_, 12, "middle");

  double ly = oy + size - 6;
  double lx = ox + margin;
  for (const ScatterGroup& g : groups_) {
    if (g.label.empty()) continue;
    svg.circle(lx + 4, ly - 4, 3.5, g.filled ? g.color : "none",
               g.filled ? "none" : g.color);
    svg.text(lx + 12, ly, g.label, 10);
    lx += 14 + 7.0 * g.label.size();
  }
}

void render_panels(const std::filesystem::path& path, const std::vector<ScatterPanel>& panels,
                   double panel_size) {
  if (panels.empty()) throw ConfigError("render_panels: no panels");
  SvgWriter svg(panel_size * panels.size(), panel_size);
  for (std::size_t i = 0; i < panels.size(); ++i)
    panels[i].draw(svg, panel_size * i, 0.0, panel_size);
  svg.write(path);
}

}  // namespace smpred
