#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace smpred {

// Minimal self-contained SVG writer: lines, polylines, polygons, circles and
// text are all the charts need. Output is deterministic (fixed-precision
// coordinates, no timestamps).
class SvgWriter {
 public:
  SvgWriter(double width, double height);

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double stroke_width = 1.0);
  void polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                const std::string& stroke, double stroke_width = 1.5);
  void polygon(const std::vector<double>& xs, const std::vector<double>& ys,
               const std::string& fill, double opacity = 1.0);
  void circle(double cx, double cy, double r, const std::string& fill,
              const std::string& stroke = "none", double opacity = 1.0);
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& stroke = "none");
  void text(double x, double y, const std::string& s, double size = 12.0,
            const std::string& anchor = "start", const std::string& fill = "#333333");

  std::string str() const;
  void write(const std::filesystem::path& path) const;

 private:
  double width_, height_;
  std::string body_;
};

// One curve with an optional shaded band (mean +- std).
struct Series {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band_lo;  // empty or same length as x
  std::vector<double> band_hi;
  std::string color = "#1f77b4";
  std::string label;
};

class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label, bool log_y = false);

  void add(Series series);
  void render(const std::filesystem::path& path) const;

 private:
  std::string title_, x_label_, y_label_;
  bool log_y_;
  std::vector<Series> series_;
};

struct ScatterGroup {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool filled = true;  // false renders ring markers
  double radius = 3.0;
  std::string label;
};

// Equal-aspect scatter panel; `segments` pair up points of two clouds
// (ground truth vs projection).
class ScatterPanel {
 public:
  explicit ScatterPanel(std::string title) : title_(std::move(title)) {}

  void add(ScatterGroup group);
  // Straight connector from (x1[i], y1[i]) to (x2[i], y2[i]).
  void connect(const std::vector<double>& x1, const std::vector<double>& y1,
               const std::vector<double>& x2, const std::vector<double>& y2,
               const std::string& color = "#aaaaaa");

  const std::string& title() const { return title_; }

  // Draws into `svg` inside the pixel box [px, px+size] x [py, py+size].
  void draw(SvgWriter& svg, double px, double py, double size) const;

 private:
  struct Connector {
    std::vector<double> x1, y1, x2, y2;
    std::string color;
  };
  std::string title_;
  std::vector<ScatterGroup> groups_;
  std::vector<Connector> connectors_;
};

// Lays out panels left to right in one SVG file.
void render_panels(const std::filesystem::path& path, const std::vector<ScatterPanel>& panels,
                   double panel_size = 300.0);

}  // namespace smpred
