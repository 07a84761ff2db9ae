#include "carnot/flow.hpp"

#include <cmath>

#include "carnot/operators.hpp"

namespace carnot {

PolarCurveParams heisenberg_curve_params(const GroupSpec& spec, const Point& a,
                                         double eps_z) {
  if (spec.kind != GroupKind::Heisenberg)
    throw InvalidArgument("heisenberg curve: '" + spec.name + "' is not Heisenberg");
  check_point(spec, a);
  const int m = spec.m();
  const double zsq = a.coords.head(m).squaredNorm();
  if (std::sqrt(zsq) < eps_z)
    throw OnExclusionSet("heisenberg curve: start point on the vertical axis");
  PolarCurveParams p;
  p.a = a;
  p.alpha = a[m] / zsq;
  return p;
}

Point heisenberg_flow_closed(const GroupSpec& spec, const Point& a, double s,
                             double eps_z) {
  if (!(s > 0.0)) throw InvalidArgument("flow: s must be positive");
  (void)heisenberg_curve_params(spec, a, eps_z);  // validates
  std::span<const double> as(a.coords.data(), static_cast<std::size_t>(a.dim()));
  auto out = heisenberg_flow_closed_t<double>(spec.heis_n, as, s);
  return Point(Eigen::Map<const Vec>(out.data(), static_cast<long>(out.size())));
}

namespace {

Vec flow_field(const GroupSpec& spec, const HomNorm& norm, const Vec& x,
               double eps_grad) {
  auto nj = norm.field.jet1(x);
  auto frame = frame_coefficients(spec, Point(x));
  Vec grad = grad_of(nj);
  double gn2 = 0.0;
  Vec comps(spec.m());
  for (int i = 0; i < spec.m(); ++i) {
    comps[i] = frame[i].dot(grad);
    gn2 += comps[i] * comps[i];
  }
  if (std::sqrt(gn2) < eps_grad)
    throw OnExclusionSet("flow: trajectory entered the exclusion tube (||∇_0N|| < eps)");
  Vec out = Vec::Zero(x.size());
  const double w = nj.v / gn2;
  for (int i = 0; i < spec.m(); ++i) out += (w * comps[i]) * frame[i];
  return out;
}

Mat flow_field_jacobian(const GroupSpec& spec, const HomNorm& norm, const Vec& x) {
  const int n = static_cast<int>(x.size());
  std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
  auto seeds = jets::seed_jet1(xs);
  auto gj = flow_field_t<jets::Jet1>(spec, norm, {seeds.data(), seeds.size()});
  Mat out(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = gj[static_cast<std::size_t>(r)].g[static_cast<std::size_t>(c)];
  return out;
}

}  // namespace

Point integrate_flow(const GroupSpec& spec, const HomNorm& norm, const Point& g,
                     double s_target, const OdeOptions& opt, double eps_grad) {
  if (!(s_target > 0.0)) throw InvalidArgument("integrate_flow: s must be positive");
  check_point(spec, g);
  ExclusionPredicate tube{eps_grad};
  if (tube.excluded(spec, g))
    throw OnExclusionSet("integrate_flow: start point inside the exclusion tube");
  auto rhs = [&](double, const Vec& x) { return flow_field(spec, norm, x, eps_grad); };
  Vec y = integrate_ode(rhs, g.coords, 0.0, std::log(s_target), opt);
  return Point(std::move(y));
}

FlowJacobianResult integrate_flow_with_jacobian(const GroupSpec& spec,
                                                const HomNorm& norm, const Point& g,
                                                double s_target, const OdeOptions& opt,
                                                double eps_grad) {
  if (!(s_target > 0.0)) throw InvalidArgument("integrate_flow: s must be positive");
  check_point(spec, g);
  const int n = spec.dim();
  // State layout: [x (n), J row-major (n*n)]; dJ/dtau = DG(x) J.
  Vec y0(n + n * n);
  y0.head(n) = g.coords;
  Mat id = Mat::Identity(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) y0[n + r * n + c] = id(r, c);

  auto rhs = [&](double, const Vec& y) {
    Vec x = y.head(n);
    Vec dy(n + n * n);
    dy.head(n) = flow_field(spec, norm, x, eps_grad);
    Mat dg = flow_field_jacobian(spec, norm, x);
    Mat j(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) j(r, c) = y[n + r * n + c];
    Mat dj = dg * j;
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) dy[n + r * n + c] = dj(r, c);
    return dy;
  };
  Vec y = integrate_ode(rhs, y0, 0.0, std::log(s_target), opt);

  FlowJacobianResult res;
  res.point = Point(y.head(n));
  res.jacobian = Mat(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) res.jacobian(r, c) = y[n + r * n + c];
  return res;
}

Point polar_curve(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                  double s, const OdeOptions& opt) {
  if (spec.kind == GroupKind::Heisenberg) return heisenberg_flow_closed(spec, a, s);
  if (spec.kind == GroupKind::Euclidean) return dilate(spec, s, a);
  return integrate_flow(spec, norm, a, s, opt);
}

double curve_speed(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                   double eps_grad) {
  check_point(spec, a);
  const double gn = hgrad(spec, norm.field, a).norm();
  if (gn < eps_grad)
    throw OnExclusionSet("curve_speed: point on the characteristic set");
  return 1.0 / gn;
}

Point arclength_curve(const GroupSpec& spec, const HomNorm& norm, const Point& a,
                      double s, const OdeOptions& opt) {
  const double lambda = hgrad(spec, norm.field, a).norm();
  if (lambda < kExclusionTubeDefault)
    throw OnExclusionSet("arclength_curve: point on the characteristic set");
  return polar_curve(spec, norm, a, lambda * s, opt);
}

Vec flow_velocity(const GroupSpec& spec, const HomNorm& norm, const Point& g,
                  double s) {
  return flow_field(spec, norm, g.coords, kExclusionTubeDefault) / s;
}

}  // namespace carnot
