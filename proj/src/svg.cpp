#include "carnot/svg.hpp"

#include <cstdio>

namespace carnot {

void SvgPlot::set_view(double x_lo, double x_hi, double y_lo, double y_hi) {
  xlo_ = x_lo;
  xhi_ = x_hi;
  ylo_ = y_lo;
  yhi_ = y_hi;
}

void SvgPlot::add_path(const std::vector<std::pair<double, double>>& pts,
                       const std::string& stroke) {
  if (pts.size() < 2) return;
  std::string d;
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double px = (pts[i].first - xlo_) / (xhi_ - xlo_) * width_;
    const double py = height_ - (pts[i].second - ylo_) / (yhi_ - ylo_) * height_;
    std::snprintf(buf, sizeof(buf), "%c%.3f %.3f", i == 0 ? 'M' : 'L', px, py);
    d += buf;
  }
  paths_.push_back("  <path d=\"" + d + "\" fill=\"none\" stroke=\"" + stroke +
                   "\" stroke-width=\"1.2\"/>\n");
}

std::string SvgPlot::str() const {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                "viewBox=\"0 0 %d %d\">\n",
                width_, height_, width_, height_);
  out += buf;
  out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& p : paths_) out += p;
  out += "</svg>\n";
  return out;
}

}  // namespace carnot
