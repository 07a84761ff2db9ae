#pragma once

// Minimal deterministic SVG writer for flowline plots: fixed viewport, paths
// emitted in insertion order, fixed-precision coordinates.

#include <string>
#include <vector>

#include "carnot/types.hpp"

namespace carnot {

class SvgPlot {
 public:
  SvgPlot(int width, int height) : width_(width), height_(height) {}

  /// Data-space bounding box (mapped to the viewport, y up).
  void set_view(double x_lo, double x_hi, double y_lo, double y_hi);

  /// Polyline path from data points (col 0 = x, col 1 = y).
  void add_path(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke = "#1f6f8b");

  std::string str() const;

 private:
  int width_, height_;
  double xlo_ = -1, xhi_ = 1, ylo_ = -1, yhi_ = 1;
  std::vector<std::string> paths_;
};

}  // namespace carnot
