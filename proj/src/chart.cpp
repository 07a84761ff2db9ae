#include "carnot/chart.hpp"

#include <cmath>

namespace carnot {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<jets::Jet1> seed_vec(const Vec& x) {
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  return jets::seed_jet1(xs);
}

}  // namespace

SphereChart make_sphere_chart(const GroupSpec& spec, const HomNorm& norm,
                              double delta_pole, ChartVariant variant,
                              double rotation) {
  SphereChart chart;
  chart.spec = spec;
  chart.norm = norm;
  chart.variant = variant;
  chart.delta_pole = delta_pole;
  chart.rotation = rotation;

  std::vector<double> lo, hi;
  std::vector<bool> per;
  auto sphere_dims = [&](int d) {
    for (int i = 0; i + 2 < d; ++i) {
      lo.push_back(0.0);
      hi.push_back(kPi);
      per.push_back(false);
    }
    if (d >= 2) {
      lo.push_back(0.0);
      hi.push_back(2.0 * kPi);
      per.push_back(true);
    }
  };

  if (spec.kind == GroupKind::Euclidean) {
    sphere_dims(spec.dim());
  } else {
    const int k = spec.k();
    double th_lo = (k == 1) ? -kPi / 2 + delta_pole : 0.0;
    double th_hi = kPi / 2 - delta_pole;
    if (variant == ChartVariant::CubicStretched) {
      // Invert theta = v + c v^3 at the band ends (Newton; monotone).
      auto invert = [](double theta) {
        double v = theta;
        for (int it = 0; it < 60; ++it) {
          const double f = v + kChartCubicCoeff * v * v * v - theta;
          const double df = 1.0 + 3.0 * kChartCubicCoeff * v * v;
          v -= f / df;
        }
        return v;
      };
      th_lo = invert(th_lo);
      th_hi = invert(th_hi);
    }
    lo.push_back(th_lo);
    hi.push_back(th_hi);
    per.push_back(false);
    sphere_dims(spec.m());
    sphere_dims(k);
  }

  const int d = static_cast<int>(lo.size());
  if (d != spec.dim() - 1)
    throw Error("make_sphere_chart: parameter dimension mismatch");
  chart.lo = Eigen::Map<const Vec>(lo.data(), d);
  chart.hi = Eigen::Map<const Vec>(hi.data(), d);
  chart.periodic = per;
  return chart;
}

Point SphereChart::map(const Vec& xi) const {
  if (xi.size() != lo.size()) throw DimensionMismatch("chart: wrong parameter size");
  std::span<const double> xs(xi.data(), static_cast<std::size_t>(xi.size()));
  auto a = chart_map_t<double>(*this, xs);
  return Point(Eigen::Map<const Vec>(a.data(), static_cast<long>(a.size())));
}

Mat SphereChart::chart_jacobian(const Vec& xi) const {
  auto seeds = seed_vec(xi);
  auto a = chart_map_t<jets::Jet1>(*this, {seeds.data(), seeds.size()});
  const int n = static_cast<int>(a.size()), d = dims();
  Mat out(n, d);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < d; ++c)
      out(r, c) = a[static_cast<std::size_t>(r)].g[static_cast<std::size_t>(c)];
  return out;
}

double SphereChart::surface_jacobian(const Vec& xi) const {
  Mat a = chart_jacobian(xi);
  return std::sqrt((a.transpose() * a).determinant());
}

double sigma_density(const SphereChart& chart, const Vec& xi, double s,
                     const OdeOptions& opt) {
  const GroupSpec& spec = chart.spec;
  const int n = spec.dim(), d = chart.dims();
  if (!(s > 0.0)) throw InvalidArgument("sigma_density: s must be positive");
  const double weight = std::pow(s, spec.hom_dimension - 1);

  if (spec.kind == GroupKind::Heisenberg || spec.kind == GroupKind::Euclidean) {
    // Exact jets through chart + closed-form flow in the variables (s, xi).
    Vec y(n);
    y[0] = s;
    y.tail(d) = xi;
    auto seeds = seed_vec(y);
    std::span<const jets::Jet1> ys(seeds.data(), seeds.size());
    auto a = chart_map_t<jets::Jet1>(chart, ys.subspan(1));
    std::vector<jets::Jet1> gamma;
    if (spec.kind == GroupKind::Heisenberg) {
      gamma = heisenberg_flow_closed_t<jets::Jet1>(
          spec.heis_n, {a.data(), a.size()}, seeds[0]);
    } else {
      gamma.reserve(a.size());
      for (auto& ai : a) gamma.push_back(ai * seeds[0]);
    }
    Mat dphi(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        dphi(r, c) = gamma[static_cast<std::size_t>(r)].g[static_cast<std::size_t>(c)];
    return std::abs(dphi.determinant()) / weight;
  }

  // General route: chart jacobian + variational flow.
  Point a = chart.map(xi);
  Mat ajac = chart.chart_jacobian(xi);
  Mat dphi(n, n);
  if (s == 1.0) {
    dphi.rightCols(d) = ajac;
    dphi.col(0) = flow_velocity(spec, chart.norm, a, 1.0);
  } else {
    auto fj = integrate_flow_with_jacobian(spec, chart.norm, a, s, opt);
    dphi.rightCols(d) = fj.jacobian * ajac;
    dphi.col(0) = flow_velocity(spec, chart.norm, fj.point, s);
  }
  return std::abs(dphi.determinant()) / weight;
}

double dilation_density(const SphereChart& chart, const Vec& xi, double lambda) {
  const GroupSpec& spec = chart.spec;
  const int n = spec.dim(), d = chart.dims();
  if (!(lambda > 0.0)) throw InvalidArgument("dilation_density: lambda must be positive");
  Vec y(n);
  y[0] = lambda;
  y.tail(d) = xi;
  auto seeds = seed_vec(y);
  std::span<const jets::Jet1> ys(seeds.data(), seeds.size());
  auto a = chart_map_t<jets::Jet1>(chart, ys.subspan(1));
  const int m = spec.m();
  std::vector<jets::Jet1> phi;
  phi.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (static_cast<int>(i) < m || spec.step == 1)
      phi.push_back(a[i] * seeds[0]);
    else
      phi.push_back(a[i] * (seeds[0] * seeds[0]));
  }
  Mat dphi(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      dphi(r, c) = phi[static_cast<std::size_t>(r)].g[static_cast<std::size_t>(c)];
  return std::abs(dphi.determinant()) / std::pow(lambda, spec.hom_dimension - 1);
}

}  // namespace carnot
