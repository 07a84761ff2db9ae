#pragma once

// Parametrization of the unit N-sphere S = {N = 1} and the surface measure
// density derived from the flow Jacobian.
//
// Step-two chart: x = sqrt(cos th) * omega, z = (sin th / sqrt(c)) * zeta with
// omega on the horizontal unit sphere and zeta on the center unit sphere; the
// polar caps around the characteristic poles (x -> 0) are cut at delta_pole.
// Euclidean groups use plain hyperspherical angles.
//
// The density of the Radon measure sigma is not assumed: it is computed as
//   rho(xi) = |det D_{(s,xi)} Phi(s, xi)| / s^{Q-1},   Phi(s, xi) = gamma_{a(xi)}(s),
// through exact jets of the closed-form flow where available and through the
// variational ODE otherwise. Its s-independence is a testable statement.

#include "carnot/flow.hpp"
#include "carnot/norms.hpp"

namespace carnot {

enum class ChartVariant {
  Standard,      // polar angle theta itself is the parameter
  CubicStretched // parameter v with theta = v + 0.15 v^3; overlapping alt chart
};

inline constexpr double kChartCubicCoeff = 0.15;

struct SphereChart {
  GroupSpec spec;
  HomNorm norm;
  ChartVariant variant = ChartVariant::Standard;
  double delta_pole = 1e-7;
  double rotation = 0.0;  // offset added to the final periodic angles

  Vec lo, hi;                  // parameter box, dimension N-1
  std::vector<bool> periodic;  // per-dimension: equal-weight periodic rule applies

  int dims() const { return static_cast<int>(lo.size()); }

  Point map(const Vec& xi) const;
  /// d a / d xi by AD, N x (N-1).
  Mat chart_jacobian(const Vec& xi) const;
  /// Euclidean surface area element sqrt(det(A^T A)) of the embedded chart.
  double surface_jacobian(const Vec& xi) const;
};

SphereChart make_sphere_chart(const GroupSpec& spec, const HomNorm& norm,
                              double delta_pole = 1e-7,
                              ChartVariant variant = ChartVariant::Standard,
                              double rotation = 0.0);

/// Unit vector on S^{d-1} from d-1 hyperspherical angles (last one periodic,
/// shifted by rot_last).
template <class T>
std::vector<T> unit_sphere_t(int d, std::span<const T> ang, double rot_last,
                             const T& exemplar) {
  using jets::one_like;
  std::vector<T> out;
  out.reserve(d);
  if (d == 1) {
    out.push_back(one_like(exemplar));
    return out;
  }
  T running = one_like(exemplar);
  for (int i = 0; i < d - 1; ++i) {
    T a = (i == d - 2) ? ang[i] + rot_last : ang[i] + 0.0;
    out.push_back(running * jm::cos(a));
    running = running * jm::sin(a);
  }
  out.push_back(running);
  return out;
}

/// Chart map over generic scalars; xi has length N-1.
template <class T>
std::vector<T> chart_map_t(const SphereChart& chart, std::span<const T> xi) {
  const GroupSpec& spec = chart.spec;
  if (spec.kind == GroupKind::Euclidean)
    return unit_sphere_t(spec.dim(), xi, chart.rotation, xi[0]);

  const int m = spec.m(), k = spec.k();
  T theta = chart.variant == ChartVariant::CubicStretched
                ? xi[0] + kChartCubicCoeff * (xi[0] * xi[0] * xi[0])
                : xi[0] + 0.0;
  std::span<const T> omega_ang = xi.subspan(1, static_cast<std::size_t>(m - 1));
  std::span<const T> zeta_ang = xi.subspan(static_cast<std::size_t>(m),
                                           static_cast<std::size_t>(k - 1));
  auto omega = unit_sphere_t(m, omega_ang, chart.rotation, xi[0]);
  auto zeta = unit_sphere_t(k, zeta_ang, k >= 2 ? chart.rotation : 0.0, xi[0]);
  T hscale = jm::sqrt(jm::cos(theta));
  T zscale = jm::sin(theta) * (1.0 / std::sqrt(chart.norm.c));
  std::vector<T> out;
  out.reserve(m + k);
  for (int i = 0; i < m; ++i) out.push_back(hscale * omega[static_cast<std::size_t>(i)]);
  for (int l = 0; l < k; ++l) out.push_back(zscale * zeta[static_cast<std::size_t>(l)]);
  return out;
}

/// Density of sigma at chart parameter xi, evaluated via the flow map at
/// radial parameter s (s-independent up to numerics; default s = 1).
double sigma_density(const SphereChart& chart, const Vec& xi, double s = 1.0,
                     const OdeOptions& opt = {});

/// Density of the dilation-polar measure, via Phi(lambda, xi) = delta_lambda(a(xi)).
double dilation_density(const SphereChart& chart, const Vec& xi, double lambda = 1.0);

}  // namespace carnot
