#pragma once

#include "illumdepth/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <string>

namespace illumdepth {

// Minimal SVG canvas with a world-to-pixel map (y up).
class Svg {
 public:
  Svg(double width, double height, double xmin, double xmax, double ymin, double ymax)
      : w_(width), h_(height), xmin_(xmin), xmax_(xmax), ymin_(ymin), ymax_(ymax) {
    os_ << std::setprecision(6);
    os_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\" viewBox=\"0 0 "
        << w_ << ' ' << h_ << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  double px(double x) const { return kPad + (x - xmin_) / (xmax_ - xmin_) * (w_ - 2 * kPad); }
  double py(double y) const { return h_ - kPad - (y - ymin_) / (ymax_ - ymin_) * (h_ - 2 * kPad); }

  void polygon(const RowMatrix& pts, const std::string& stroke, const std::string& fill, double opacity) {
    os_ << "<polygon points=\"";
    for (int i = 0; i < pts.rows(); ++i) os_ << px(pts(i, 0)) << ',' << py(pts(i, 1)) << ' ';
    os_ << "\" stroke=\"" << stroke << "\" fill=\"" << fill << "\" fill-opacity=\"" << opacity << "\"/>\n";
  }
  void dot(double x, double y, double r, const std::string& color) {
    os_ << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << r << "\" fill=\"" << color << "\"/>\n";
  }
  void line(double x0, double y0, double x1, double y1, const std::string& color, double width = 1.0) {
    os_ << "<line x1=\"" << px(x0) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(x1) << "\" y2=\"" << py(y1)
        << "\" stroke=\"" << color << "\" stroke-width=\"" << width << "\"/>\n";
  }
  void rect(double x0, double y0, double x1, double y1, const std::string& stroke, const std::string& fill) {
    os_ << "<rect x=\"" << std::min(px(x0), px(x1)) << "\" y=\"" << std::min(py(y0), py(y1)) << "\" width=\""
        << std::abs(px(x1) - px(x0)) << "\" height=\"" << std::abs(py(y1) - py(y0)) << "\" stroke=\"" << stroke
        << "\" fill=\"" << fill << "\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12) {
    os_ << "<text x=\"" << px(x) << "\" y=\"" << py(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\">" << s << "</text>\n";
  }
  void label(double x_pixel, double y_pixel, const std::string& s, int size = 12) {
    os_ << "<text x=\"" << x_pixel << "\" y=\"" << y_pixel << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\">" << s << "</text>\n";
  }
  void frame() {
    os_ << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << w_ - 2 * kPad << "\" height=\"" << h_ - 2 * kPad
        << "\" stroke=\"black\" fill=\"none\"/>\n";
  }
  std::string str() const { return os_.str() + "</svg>\n"; }

 private:
  static constexpr double kPad = 40.0;
  double w_, h_, xmin_, xmax_, ymin_, ymax_;
  std::ostringstream os_;
};

}  // namespace illumdepth
