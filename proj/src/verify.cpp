#include "carnot/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "carnot/flow.hpp"
#include "carnot/operators.hpp"
#include "carnot/parallel.hpp"
#include "carnot/rng.hpp"

namespace carnot {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

ResidualStats stats_from(const std::vector<double>& scaled,
                         const std::vector<double>& raw, double excluded) {
  ResidualStats st;
  st.count = static_cast<int>(scaled.size());
  st.excluded_fraction = excluded;
  for (double x : scaled) st.max_scaled = std::max(st.max_scaled, x);
  for (double x : raw) st.max_raw = std::max(st.max_raw, x);
  st.median_scaled = median_of(scaled);
  return st;
}

}  // namespace

std::vector<Point> sample_cloud(const GroupSpec& spec, const HomNorm& norm,
                                const SamplingConfig& cfg, double* excluded_fraction) {
  SphereChart chart = make_sphere_chart(spec, norm, 1e-4);
  const int cd = chart.dims();
  rng::ScrambledHalton seq(cd + 1, cfg.seed);
  std::vector<Point> cloud;
  cloud.reserve(static_cast<std::size_t>(cfg.points));
  std::int64_t drawn = 0, rejected = 0;
  Vec xi(cd);
  const std::int64_t budget = 1000LL * cfg.points + 1000;
  while (static_cast<int>(cloud.size()) < cfg.points && drawn < budget) {
    for (int d = 0; d < cd; ++d)
      xi[d] = chart.lo[d] + (chart.hi[d] - chart.lo[d]) * seq.coordinate(drawn, d);
    const double s = cfg.n_lo + (cfg.n_hi - cfg.n_lo) * seq.coordinate(drawn, cd);
    ++drawn;
    Point a = chart.map(xi);
    if (hgrad(spec, norm.field, a).norm() < cfg.min_hgrad) {
      ++rejected;
      continue;
    }
    cloud.push_back(dilate(spec, s, a));
  }
  if (static_cast<int>(cloud.size()) < cfg.points)
    throw ToleranceNotMet("sample_cloud: rejection budget exhausted");
  if (excluded_fraction)
    *excluded_fraction =
        drawn > 0 ? static_cast<double>(rejected) / static_cast<double>(drawn) : 0.0;
  return cloud;
}

ResidualStats verify_condition_i(const GroupSpec& spec, const HomNorm& norm,
                                 const SamplingConfig& cfg) {
  double excluded = 0.0;
  auto cloud = sample_cloud(spec, norm, cfg, &excluded);
  std::vector<double> scaled, raw;
  par::transform_indexed(static_cast<std::int64_t>(cloud.size()), cfg.parallel, scaled,
                         [&](std::int64_t i) {
                           const Point& g = cloud[static_cast<std::size_t>(i)];
                           const double linf = infty_laplacian(spec, norm.field, g);
                           const double nv = norm.value(g);
                           const double gn = hgrad(spec, norm.field, g).norm();
                           return nv * std::abs(linf) / std::pow(gn, 4.0);
                         });
  raw.resize(scaled.size());
  par::transform_indexed(static_cast<std::int64_t>(cloud.size()), cfg.parallel, raw,
                         [&](std::int64_t i) {
                           return std::abs(infty_laplacian(
                               spec, norm.field, cloud[static_cast<std::size_t>(i)]));
                         });
  return stats_from(scaled, raw, excluded);
}

ResidualStats verify_condition_ii(const GroupSpec& spec, const HomNorm& norm,
                                  double p, const SamplingConfig& cfg) {
  if (std::isinf(p)) return verify_condition_i(spec, norm, cfg);
  double excluded = 0.0;
  auto cloud = sample_cloud(spec, norm, cfg, &excluded);
  SingularSolution up = u_p_solution(norm, p);
  const double q = spec.hom_dimension;
  std::vector<double> scaled, raw;
  par::transform_indexed(static_cast<std::int64_t>(cloud.size()), cfg.parallel, scaled,
                         [&](std::int64_t i) {
                           const Point& g = cloud[static_cast<std::size_t>(i)];
                           const double lp = p_laplacian(spec, up.field, g, p);
                           return std::pow(norm.value(g), q) * std::abs(lp);
                         });
  raw.resize(scaled.size());
  par::transform_indexed(
      static_cast<std::int64_t>(cloud.size()), cfg.parallel, raw, [&](std::int64_t i) {
        return std::abs(
            p_laplacian(spec, up.field, cloud[static_cast<std::size_t>(i)], p));
      });
  return stats_from(scaled, raw, excluded);
}

std::vector<double> default_p_list(const GroupSpec& spec) {
  std::vector<double> ps = {1.5, 2.0, 3.0, static_cast<double>(spec.hom_dimension), 10.0};
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  return ps;
}

namespace {

// Sample sphere points for the flow checks: chart nodes away from the poles.
std::vector<Point> sphere_sample(const GroupSpec& spec, const HomNorm& norm, int count,
                                 std::uint64_t seed) {
  SphereChart chart = make_sphere_chart(spec, norm, 0.15);
  rng::ScrambledHalton seq(chart.dims(), seed);
  std::vector<Point> pts;
  Vec xi(chart.dims());
  for (int i = 0; static_cast<int>(pts.size()) < count && i < 100 * count; ++i) {
    for (int d = 0; d < chart.dims(); ++d)
      xi[d] = chart.lo[d] + (chart.hi[d] - chart.lo[d]) * seq.coordinate(i, d);
    Point a = chart.map(xi);
    if (hgrad(spec, norm.field, a).norm() < 0.2) continue;
    pts.push_back(std::move(a));
  }
  return pts;
}

// Exact curve tangent: AD through the closed form for Heisenberg/Euclidean,
// the (integrated-point) ODE right side otherwise.
Vec curve_tangent(const GroupSpec& spec, const HomNorm& norm, const Point& a, double s) {
  if (spec.kind == GroupKind::Heisenberg) {
    const int n = spec.dim();
    Vec y(n + 1);
    y[0] = s;
    y.tail(n) = a.coords;
    std::span<const double> ys(y.data(), static_cast<std::size_t>(y.size()));
    auto seeds = jets::seed_jet1(ys);
    std::span<const jets::Jet1> sj(seeds.data(), seeds.size());
    auto gamma = heisenberg_flow_closed_t<jets::Jet1>(spec.heis_n, sj.subspan(1), seeds[0]);
    Vec v(n);
    for (int r = 0; r < n; ++r) v[r] = gamma[static_cast<std::size_t>(r)].g[0];
    return v;
  }
  if (spec.kind == GroupKind::Euclidean) return a.coords;  // gamma = s a
  Point g = integrate_flow(spec, norm, a, s);
  return flow_velocity(spec, norm, g, s);
}

CheckLine line(const std::string& name, double value, double tol,
               const std::string& source, const std::string& note = "") {
  CheckLine l;
  l.name = name;
  l.value = value;
  l.tolerance = tol;
  l.pass = value <= tol;
  l.source = source;
  l.note = note;
  return l;
}

CheckLine skipped_line(const std::string& name, const std::string& note) {
  CheckLine l;
  l.name = name;
  l.skipped = true;
  l.pass = true;
  l.note = note;
  return l;
}

}  // namespace

std::vector<CheckLine> verify_condition_iii(const GroupSpec& spec, const HomNorm& norm,
                                            const SamplingConfig& cfg,
                                            const ToleranceSet& tol) {
  std::vector<CheckLine> out;
  const int q = spec.hom_dimension;
  const bool closed_form =
      spec.kind == GroupKind::Heisenberg || spec.kind == GroupKind::Euclidean;
  auto sphere = sphere_sample(spec, norm, 24, cfg.seed);
  const std::vector<double> s_grid = {0.5, 1.0, 2.0};

  // (a) ODE integration against the closed form, Heisenberg only.
  if (spec.kind == GroupKind::Heisenberg) {
    double sup = 0.0;
    auto curves = sphere_sample(spec, norm, 100, cfg.seed + 1);
    for (const auto& a : curves) {
      for (double s : {0.1, 0.5, 2.0, 10.0}) {
        Point ode = integrate_flow(spec, norm, a, s);
        Point cf = heisenberg_flow_closed(spec, a, s);
        sup = std::max(sup, (ode.coords - cf.coords).cwiseAbs().maxCoeff());
      }
    }
    out.push_back(line("flow_ode_vs_closed_form", sup,
                       tol.get("flow_closed", 1e-8), "polar_flow"));
  } else {
    out.push_back(skipped_line("flow_ode_vs_closed_form",
                               "closed form only available on Heisenberg groups"));
  }

  // (b) N(gamma_a(s)) = s.
  {
    double worst = 0.0;
    for (const auto& a : sphere)
      for (double s : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        Point g = polar_curve(spec, norm, a, s);
        worst = std::max(worst, std::abs(norm.value(g) - s));
      }
    out.push_back(line("radial_parameter", worst,
                       tol.get("flow_radial", closed_form ? 1e-9 : 1e-8), "polar_flow"));
  }

  // (c) Tangent collinearity with ∇_0 N (sine of the angle between the
  // ambient tangent and the lifted horizontal gradient).
  {
    double worst = 0.0;
    for (const auto& a : sphere)
      for (double s : s_grid) {
        Point g = polar_curve(spec, norm, a, s);
        Vec tang = curve_tangent(spec, norm, a, s);
        auto frame = frame_coefficients(spec, g);
        HorizontalVector gn = hgrad(spec, norm.field, g);
        Vec lift = Vec::Zero(spec.dim());
        for (int i = 0; i < spec.m(); ++i) lift += gn.components[i] * frame[i];
        worst = std::max(worst, sine_angle(tang, lift));
      }
    out.push_back(line("tangent_collinearity", worst,
                       tol.get("flow_collinearity", closed_form ? 1e-9 : 1e-6),
                       "polar_flow"));
  }

  // (d) Constant speed along each curve.
  {
    double worst = 0.0;
    for (const auto& a : sphere) {
      double ref = -1.0;
      for (double s : s_grid) {
        double speed;
        if (closed_form) {
          // Horizontal speed: frame components of the exact ambient tangent.
          Point g = polar_curve(spec, norm, a, s);
          Vec tang = curve_tangent(spec, norm, a, s);
          auto frame = frame_coefficients(spec, g);
          Mat fr(spec.dim(), spec.m());
          for (int i = 0; i < spec.m(); ++i) fr.col(i) = frame[i];
          Vec comps = (fr.transpose() * fr).ldlt().solve(fr.transpose() * tang);
          speed = comps.norm();
        } else {
          Point g = integrate_flow(spec, norm, a, s);
          speed = norm.value(g) / (s * hgrad(spec, norm.field, g).norm());
        }
        if (ref < 0.0)
          ref = speed;
        else
          worst = std::max(worst, std::abs(speed - ref));
      }
    }
    out.push_back(line("speed_constancy", worst,
                       tol.get("flow_speed", closed_form ? 1e-9 : 1e-8), "polar_flow"));
  }

  // (e) Semigroup law phi(s1, phi(s2, g)) = phi(s1 s2, g).
  {
    double worst = 0.0;
    int used = 0;
    for (const auto& a : sphere) {
      if (used++ >= 8) break;
      Point g = dilate(spec, 1.3, a);
      Point two = integrate_flow(spec, norm, integrate_flow(spec, norm, g, 3.0), 2.0);
      Point six = integrate_flow(spec, norm, g, 6.0);
      worst = std::max(worst, (two.coords - six.coords).cwiseAbs().maxCoeff());
    }
    out.push_back(line("semigroup", worst, tol.get("flow_semigroup", 1e-8), "polar_flow"));
  }

  // (f) Flow Jacobian det D_g phi(t, .) = t^Q.
  {
    double worst = 0.0;
    int used = 0;
    for (const auto& a : sphere) {
      if (used++ >= 4) break;
      for (double t : {0.5, 2.0}) {
        auto fj = integrate_flow_with_jacobian(spec, norm, a, t);
        const double expected = std::pow(t, q);
        worst = std::max(worst,
                         std::abs(fj.jacobian.determinant() - expected) / expected);
      }
    }
    out.push_back(line("flow_jacobian", worst, tol.get("flow_jacobian", 1e-6),
                       "polar_flow"));
  }

  // (g) Divergence identity div_0(N ∇_0N / ||∇_0N||^2) = Q.
  {
    ScalarField nf = norm.field;
    GroupSpec sp = spec;
    HorizontalField field;
    for (int i = 0; i < spec.m(); ++i) {
      ScalarField::Slots s;
      s.jet1 = [sp, nf, i](std::span<const double> x) {
        auto seeds = jets::seed_jet1(x);
        std::span<const jets::Jet1> xs(seeds.data(), seeds.size());
        auto nj = nf.grad_over(xs);
        auto frame = frame_coefficients_t<jets::Jet1>(sp, xs);
        jets::Jet1 gn2 = jets::zero_like(seeds[0]);
        std::vector<jets::Jet1> comps;
        for (int r = 0; r < sp.m(); ++r) {
          jets::Jet1 xr = jets::zero_like(seeds[0]);
          for (std::size_t j = 0; j < xs.size(); ++j)
            xr = xr + frame[static_cast<std::size_t>(r)][j] * nj.g[j];
          gn2 = gn2 + xr * xr;
          comps.push_back(std::move(xr));
        }
        return nj.v * comps[static_cast<std::size_t>(i)] / gn2;
      };
      field.push_back(ScalarField::from_slots("F" + std::to_string(i), std::move(s)));
    }
    double worst = 0.0;
    double excluded = 0.0;
    auto cloud = sample_cloud(spec, norm, cfg, &excluded);
    for (std::size_t i = 0; i < cloud.size() && i < 200; ++i)
      worst = std::max(worst, std::abs(hdiv(spec, field, cloud[i]) - q));
    out.push_back(line("divergence_identity", worst, tol.get("eq1", 1e-7),
                       "polar_flow"));
  }

  // (h) L(N) = (Q-1) ||∇_0N||^2 / N.
  {
    double worst = 0.0;
    double excluded = 0.0;
    auto cloud = sample_cloud(spec, norm, cfg, &excluded);
    for (std::size_t i = 0; i < cloud.size() && i < 400; ++i) {
      const Point& g = cloud[i];
      const double lhs = sublaplacian(spec, norm.field, g);
      const double rhs =
          (q - 1.0) * hgrad(spec, norm.field, g).squaredNorm() / norm.value(g);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    out.push_back(line("norm_laplacian_identity", worst, tol.get("eq2", 1e-9),
                       "norms_solutions"));
  }

  // (i) Chart-form volume lemma: |det DPhi(s, xi)| / s^{Q-1} is s-constant.
  {
    SphereChart chart = make_sphere_chart(spec, norm, 0.2);
    rng::ScrambledHalton seq(chart.dims(), cfg.seed + 7);
    double worst = 0.0;
    Vec xi(chart.dims());
    for (int i = 0; i < 6; ++i) {
      for (int d = 0; d < chart.dims(); ++d)
        xi[d] = chart.lo[d] + (chart.hi[d] - chart.lo[d]) * seq.coordinate(i, d);
      const double r1 = sigma_density(chart, xi, 0.5);
      const double r2 = sigma_density(chart, xi, 1.0);
      const double r3 = sigma_density(chart, xi, 2.0);
      const double spread =
          (std::max({r1, r2, r3}) - std::min({r1, r2, r3})) / std::abs(r2);
      worst = std::max(worst, spread);
    }
    out.push_back(line("lemma_vol_chart", worst, tol.get("lemma_vol", 1e-6),
                       "polar_quadrature"));
  }

  // (j) Integration formula: methods agree on a radial integrand.
  if (closed_form) {
    IntegrationJob job;
    job.spec = spec;
    job.norm = norm;
    job.integrand = catalog_integrand(spec, norm, "exp_n4");
    suggested_truncation("exp_n4", job);
    job.tol = 1e-8;
    job.parallel = cfg.parallel;
    job.method = IntegrationMethod::PolarHorizontal;
    const double ph = integrate(job).value;
    job.method = IntegrationMethod::PolarDilation;
    const double pd = integrate(job).value;
    job.method = IntegrationMethod::PolarArclength;
    const double pa = integrate(job).value;
    const double rel =
        std::max(std::abs(ph - pd), std::abs(ph - pa)) / std::abs(ph);
    out.push_back(line("integration_method_agreement", rel,
                       tol.get("method_agreement", 1e-6), "polar_quadrature"));
  } else {
    out.push_back(skipped_line("integration_method_agreement",
                               "full polar quadrature not run on ODE-flow groups"));
  }

  return out;
}

VerificationReport run_verification(const GroupSpec& spec, const HomNorm& norm,
                                    const std::vector<std::string>& conditions,
                                    const SamplingConfig& cfg, const ToleranceSet& tol) {
  VerificationReport rep;
  rep.group = spec.name;
  rep.seed = cfg.seed;
  rep.points = cfg.points;
  const bool euclid = spec.kind == GroupKind::Euclidean;

  for (const auto& cond : conditions) {
    if (cond == "i") {
      ResidualStats st = verify_condition_i(spec, norm, cfg);
      CheckLine l = line("condition_i", st.max_scaled,
                         tol.get("condition_i", euclid ? 1e-10 : 1e-8), "verification");
      char buf[96];
      std::snprintf(buf, sizeof(buf), "median=%.9e excluded_fraction=%.6f",
                    st.median_scaled, st.excluded_fraction);
      l.note = buf;
      rep.lines.push_back(l);
    } else if (cond == "ii") {
      for (double p : default_p_list(spec)) {
        ResidualStats st = verify_condition_ii(spec, norm, p, cfg);
        const double fallback = p == 2.0 ? 1e-9 : 1e-7;
        const std::string key = p == 2.0 ? "condition_ii_p2" : "condition_ii";
        char pbuf[32];
        std::snprintf(pbuf, sizeof(pbuf), "%g", p);
        std::string pname = "condition_ii_p" + std::string(pbuf);
        if (p == static_cast<double>(spec.hom_dimension)) pname += "_logbranch";
        CheckLine l = line(pname, st.max_scaled, tol.get(key, fallback), "verification");
        l.note = "p=" + std::string(pbuf);
        rep.lines.push_back(l);
      }
    } else if (cond == "iii") {
      auto lines3 = verify_condition_iii(spec, norm, cfg, tol);
      rep.lines.insert(rep.lines.end(), lines3.begin(), lines3.end());
    } else {
      throw InvalidArgument("unknown condition '" + cond + "'");
    }
  }
  return rep;
}

double ring_capacity(const GroupSpec& spec, const HomNorm& norm, const RingSpec& ring,
                     double tol, bool parallel) {
  if (!(ring.inner > 0.0) || !(ring.outer > ring.inner))
    throw InvalidArgument("ring_capacity: need 0 < a < b");
  if (!(ring.p > 1.0)) throw InvalidArgument("ring_capacity: p must exceed 1");
  const double a = ring.inner, b = ring.outer, p = ring.p;
  const int q = spec.hom_dimension;

  // Radial profile w(s) of the extremal function v = w(N): affine in u_p with
  // w(a) = 1, w(b) = 0.
  const bool logbranch = p == static_cast<double>(q);
  const double kappa = logbranch ? 0.0 : (p - q) / (p - 1.0);
  const double denom =
      logbranch ? std::log(b / a) : (std::pow(a, kappa) - std::pow(b, kappa));
  auto wprime = [&](double s) {
    return logbranch ? -1.0 / (s * denom) : kappa * std::pow(s, kappa - 1.0) / denom;
  };

  SphereChart chart = make_sphere_chart(spec, norm);
  auto node_fn = [&](const Vec& xi) {
    const double rho = sigma_density(chart, xi, 1.0);
    const Point anode = chart.map(xi);
    auto f = [&](double s) {
      Point g = polar_curve(spec, norm, anode, s);
      const double gn = hgrad(spec, norm.field, g).norm();
      return std::pow(std::abs(wprime(s)) * gn, p) * std::pow(s, q - 1);
    };
    Quad1D r = integrate_gk(f, a, b, 1e-14, tol * 0.1);
    return rho * r.value;
  };
  Quad1D total = chart_functional(chart, node_fn, tol, 16, 5, parallel);
  return total.value;
}

}  // namespace carnot
