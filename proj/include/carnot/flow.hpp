#pragma once

// The horizontal radial flow. Flowlines through a in the unit N-sphere are
// the curves gamma_a with N(gamma_a(s)) = s * N(a), tangent to ∇_0 N. On
// Heisenberg groups the flow has the closed form
//     gamma_a(s) = (s z e^{-i alpha log s}, s^2 t),  alpha = t / ||z||^2,
// with the complex rotation pairing x_j with x_{n+j}. Everywhere else it is
// obtained by integrating the ambient ODE
//     dx/ds = N(x)/s * sum_i (X_i N / ||∇_0 N||^2) X_i(x)
// in the variable tau = log s (the field is then autonomous).

#include <optional>

#include "carnot/field.hpp"
#include "carnot/group.hpp"
#include "carnot/jet.hpp"
#include "carnot/norms.hpp"
#include "carnot/ode.hpp"

namespace carnot {

inline constexpr double kExclusionTubeDefault = 1e-6;

/// The thickened null set Z where the foliation degenerates: ||x|| < eps on
/// step-two groups (the vertical set), ||g|| < eps on Euclidean groups.
struct ExclusionPredicate {
  double eps_z = kExclusionTubeDefault;

  bool excluded(const GroupSpec& spec, const Point& g) const {
    if (spec.is_step_two()) return g.coords.head(spec.m()).norm() < eps_z;
    return g.coords.norm() < eps_z;
  }
};

/// Heisenberg closed-form polar curve parameters for a on S \ Z.
struct PolarCurveParams {
  Point a;
  double alpha = 0.0;  // t / ||z||^2
};

PolarCurveParams heisenberg_curve_params(const GroupSpec& spec, const Point& a,
                                         double eps_z = kExclusionTubeDefault);

/// Closed-form Heisenberg flow point gamma_a(s).
Point heisenberg_flow_closed(const GroupSpec& spec, const Point& a, double s,
                             double eps_z = kExclusionTubeDefault);

/// Generic closed form over jets; `a` holds the start coordinates, `s` the
/// radial parameter, both as the same scalar type.
template <class T>
std::vector<T> heisenberg_flow_closed_t(int n, std::span<const T> a, const T& s) {
  using jets::zero_like;
  T zsq = zero_like(s);
  for (int i = 0; i < 2 * n; ++i) zsq = zsq + a[i] * a[i];
  const T& t = a[2 * n];
  T alpha = t / zsq;
  T theta = alpha * jm::log(s);
  T ct = jm::cos(theta), st = jm::sin(theta);
  std::vector<T> out;
  out.reserve(2 * n + 1);
  // e^{-i theta} (x_j + i x_{n+j}) = (x_j cos + x_{n+j} sin) + i(-x_j sin + x_{n+j} cos)
  for (int j = 0; j < n; ++j) out.push_back(s * (a[j] * ct + a[n + j] * st));
  for (int j = 0; j < n; ++j) out.push_back(s * (a[n + j] * ct - a[j] * st));
  out.push_back((s * s) * t);
  return out;
}

/// Ambient flow field G(x) = N(x) ∇_0N/||∇_0N||^2 lifted through the frame;
/// this is s * (d/ds) of the flow, i.e. the tau = log s velocity.
template <class T>
std::vector<T> flow_field_t(const GroupSpec& spec, const HomNorm& norm,
                            std::span<const T> x) {
  using jets::zero_like;
  const int m = spec.m();
  std::vector<T> ngrad;
  T nval = zero_like(x[0]);
  if constexpr (std::is_same_v<T, double>) {
    Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size()));
    auto nj = norm.field.jet1(xv);
    nval = nj.v;
    ngrad = nj.g;
  } else {
    auto nj = norm.field.grad_over(x);
    nval = nj.v;
    ngrad = nj.g;
  }
  auto frame = frame_coefficients_t<T>(spec, x);
  std::vector<T> comps;
  comps.reserve(m);
  T gn2 = zero_like(x[0]);
  for (int i = 0; i < m; ++i) {
    T xi = zero_like(x[0]);
    for (std::size_t j = 0; j < x.size(); ++j) xi = xi + frame[i][j] * ngrad[j];
    gn2 = gn2 + xi * xi;
    comps.push_back(std::move(xi));
  }
  T w = nval / gn2;
  std::vector<T> out;
  out.reserve(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    T acc = zero_like(x[0]);
    for (int i = 0; i < m; ++i) acc = acc + (w * comps[i]) * frame[i][j];
    out.push_back(std::move(acc));
  }
  return out;
}

/// Integrates the radial flow from g (at parameter 1) to `s_target`.
/// Throws OnExclusionSet if the trajectory meets ||∇_0 N|| < eps_grad.
Point integrate_flow(const GroupSpec& spec, const HomNorm& norm, const Point& g,
                     double s_target, const OdeOptions& opt = {},
                     double eps_grad = kExclusionTubeDefault);

struct FlowJacobianResult {
  Point point;
  Mat jacobian;  // D_g phi(s_target, .)
};

/// Flow point together with the Jacobian D_g phi obtained by integrating the
/// variational matrix ODE alongside the state.
FlowJacobianResult integrate_flow_with_jacobian(const GroupSpec& spec,
                                                const HomNorm& norm, const Point& g,
                                                double s_target,
                                                const OdeOptions& opt = {},
                                                double eps_grad = kExclusionTubeDefault);

/// gamma_a(s) by the best available route: closed form on Heisenberg, the
/// dilation ray on Euclidean groups, ODE integration otherwise.
Point polar_curve(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                  double s, const OdeOptions& opt = {});

/// Constant speed of gamma_a: 1 / ||∇_0 N(a)||.
double curve_speed(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                   double eps_grad = kExclusionTubeDefault);

/// Arc-length reparametrization beta_a(s) = gamma_a(lambda_a s) with
/// lambda_a = ||∇_0 N(a)||.
Point arclength_curve(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                      double s, const OdeOptions& opt = {});

/// Ambient velocity d/ds gamma(s) at a point g = gamma(s).
Vec flow_velocity(const GroupSpec& spec, const HomNorm& norm, const Point& g,
                  double s);

/// Sine of the angle between two vectors, computed through the orthogonal
/// residual (stable down to machine precision, unlike sqrt(1 - cos^2)).
inline double sine_angle(const Vec& u, const Vec& v) {
  const double un = u.norm(), vn = v.norm();
  if (un == 0.0 || vn == 0.0) return 0.0;
  Vec w = u / un - (u.dot(v) / (un * vn * vn)) * v;
  return w.norm();
}

}  // namespace carnot
