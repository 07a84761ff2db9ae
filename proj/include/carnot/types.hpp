#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace carnot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
/// Evaluation requested at the group identity where the field is singular.
struct AtOrigin : Error {
  using Error::Error;
};
/// Horizontal gradient too small for a p != 2 weight.
struct VanishingGradient : Error {
  using Error::Error;
};
/// Point lies on (or a trajectory entered) the excluded set Z.
struct OnExclusionSet : Error {
  using Error::Error;
};
/// 1-D root search failed to bracket / converge.
struct NoRoot : Error {
  using Error::Error;
};
/// A quadrature or solver did not reach its requested tolerance.
struct ToleranceNotMet : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

/// Group element in exponential coordinates, grouped by layer
/// (horizontal block first, higher layers appended).
struct Point {
  Vec coords;

  Point() = default;
  explicit Point(Vec c) : coords(std::move(c)) {}
  static Point zero(int n) { return Point(Vec::Zero(n)); }

  int dim() const { return static_cast<int>(coords.size()); }
  double operator[](int i) const { return coords[i]; }
  double& operator[](int i) { return coords[i]; }
};

/// Coefficients a_1..a_m of a horizontal vector w.r.t. the frame X_1..X_m.
/// Inner product and norm are the Euclidean ones on the coefficients.
struct HorizontalVector {
  Vec components;

  HorizontalVector() = default;
  explicit HorizontalVector(Vec c) : components(std::move(c)) {}

  int dim() const { return static_cast<int>(components.size()); }
  double norm() const { return components.norm(); }
  double squaredNorm() const { return components.squaredNorm(); }
  double dot(const HorizontalVector& o) const { return components.dot(o.components); }
};

}  // namespace carnot
