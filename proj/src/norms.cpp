#include "carnot/norms.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>

#include "carnot/operators.hpp"
#include "carnot/rng.hpp"

namespace carnot {

namespace {

using detail::norm_quartic_eval;

ScalarField make_quartic_field(const GroupSpec& spec, double c) {
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  return ScalarField::make(
      spec.name + "|N4",
      [m, k, c](auto x) { return norm_quartic_eval(m, k, c, x); }, 4.0);
}

ScalarField make_norm_field(const GroupSpec& spec, double c) {
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  return ScalarField::make(
      spec.name + "|N",
      [m, k, c](auto x) { return jm::pow(norm_quartic_eval(m, k, c, x), 0.25); }, 1.0);
}

HomNorm make_norm(const GroupSpec& spec, NormKind kind, double c) {
  HomNorm n;
  n.group = spec;
  n.kind = kind;
  n.c = c;
  n.field = make_norm_field(spec, c);
  n.quartic = make_quartic_field(spec, c);
  return n;
}

}  // namespace

HomNorm koranyi_norm_for(const GroupSpec& spec) {
  if (spec.kind != GroupKind::Heisenberg)
    throw InvalidArgument("koranyi norm: '" + spec.name + "' is not a Heisenberg group");
  return make_norm(spec, NormKind::Koranyi, 1.0);
}

HomNorm kaplan_norm(const GroupSpec& spec, double c) {
  if (!spec.is_step_two())
    throw InvalidArgument("kaplan norm: '" + spec.name + "' is not step two");
  if (!(c > 0.0)) throw InvalidArgument("kaplan norm: c must be positive");
  return make_norm(spec, NormKind::Kaplan, c);
}

HomNorm euclidean_norm(const GroupSpec& spec) {
  if (spec.kind != GroupKind::Euclidean)
    throw InvalidArgument("euclidean norm: '" + spec.name + "' is not Euclidean");
  return make_norm(spec, NormKind::EuclideanAbs, 0.0);
}

double koranyi_norm(const GroupSpec& spec, const Point& g) {
  if (spec.kind != GroupKind::Heisenberg)
    throw InvalidArgument("koranyi_norm: Heisenberg groups only");
  check_point(spec, g);
  double hsq = 0.0;
  for (int i = 0; i < spec.m(); ++i) hsq += g[i] * g[i];
  const double t = g[spec.m()];
  return std::pow(hsq * hsq + t * t, 0.25);
}

HomNorm natural_norm(const GroupSpec& spec) {
  switch (spec.kind) {
    case GroupKind::Heisenberg:
      return koranyi_norm_for(spec);
    case GroupKind::Euclidean:
      return euclidean_norm(spec);
    case GroupKind::HType:
    case GroupKind::StepTwoGeneric: {
      static std::mutex mu;
      static std::map<std::string, double> cache;
      {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(spec.name);
        if (it != cache.end()) return kaplan_norm(spec, it->second);
      }
      const double c = derive_kaplan_constant(spec).c;
      {
        std::lock_guard<std::mutex> lock(mu);
        cache.emplace(spec.name, c);
      }
      return kaplan_norm(spec, c);
    }
  }
  throw InvalidArgument("natural_norm: unhandled group kind");
}

KaplanDerivation derive_kaplan_constant(const GroupSpec& spec, std::uint64_t seed,
                                        int sample_size, double residual_tol) {
  if (!spec.is_step_two())
    throw InvalidArgument("derive_kaplan_constant: step-two groups only");
  const int m = spec.m(), q = spec.hom_dimension;

  // Fixed sample, kept away from the characteristic set {x = 0}.
  rng::CounterRng rg(seed);
  std::vector<Point> sample;
  std::uint64_t idx = 0;
  while (static_cast<int>(sample.size()) < sample_size && idx < 100000) {
    Vec v(spec.dim());
    for (int d = 0; d < spec.dim(); ++d)
      v[d] = rg.uniform(idx, static_cast<std::uint64_t>(d), -1.2, 1.2);
    ++idx;
    double hn = v.head(m).norm();
    if (hn < 0.4) continue;
    sample.emplace_back(v);
  }
  if (static_cast<int>(sample.size()) < sample_size)
    throw NoRoot("derive_kaplan_constant: could not draw sample");

  auto residual = [&](double c, const Point& g) {
    HomNorm n = kaplan_norm(spec, c);
    ScalarField u = folland_solution(n);
    const double lu = sublaplacian(spec, u, g, /*cross_check=*/false);
    return lu * std::pow(n.value(g), q);
  };
  auto residuals = [&](double c) {
    std::vector<double> r(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) r[i] = residual(c, sample[i]);
    return r;
  };
  auto max_abs = [](const std::vector<double>& r) {
    double mx = 0.0;
    for (double x : r) mx = std::max(mx, std::abs(x));
    return mx;
  };

  // Sign-aligned mean: signs frozen at the low end of the scan, so the
  // aggregate crosses zero exactly where the pointwise residuals flip.
  const int ngrid = 121;
  std::vector<double> cgrid(ngrid);
  for (int i = 0; i < ngrid; ++i)
    cgrid[i] = std::pow(10.0, -3.0 + 6.0 * i / (ngrid - 1));
  std::vector<double> sign0;
  {
    auto r0 = residuals(cgrid[0]);
    sign0.resize(r0.size());
    for (std::size_t i = 0; i < r0.size(); ++i) sign0[i] = r0[i] >= 0.0 ? 1.0 : -1.0;
  }
  auto aligned = [&](double c) {
    auto r = residuals(c);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += sign0[i] * r[i];
    return s / static_cast<double>(r.size());
  };

  // The aligned functional changes sign at the true constant, but individual
  // points contribute their own crossings; bisect every bracketed root and
  // keep the one that actually kills the max residual.
  std::vector<double> fvals(static_cast<std::size_t>(ngrid));
  for (int i = 0; i < ngrid; ++i) fvals[static_cast<std::size_t>(i)] = aligned(cgrid[i]);

  double best_c = -1.0, best_resid = std::numeric_limits<double>::infinity();
  for (int i = 0; i + 1 < ngrid; ++i) {
    double lo = cgrid[i], hi = cgrid[i + 1];
    double flo = fvals[static_cast<std::size_t>(i)],
           fhi = fvals[static_cast<std::size_t>(i + 1)];
    if (flo * fhi > 0.0) continue;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = aligned(mid);
      if (flo * fm <= 0.0) {
        hi = mid;
        fhi = fm;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    (void)fhi;
    const double root = 0.5 * (lo + hi);
    const double resid = max_abs(residuals(root));
    if (resid < best_resid) {
      best_resid = resid;
      best_c = root;
    }
  }
  if (best_c < 0.0)
    throw NoRoot("derive_kaplan_constant: no sign change on [1e-3, 1e3] (not H-type?)");

  KaplanDerivation out;
  out.c = best_c;
  out.max_residual = best_resid;
  out.sample_size = sample_size;
  out.seed = seed;
  if (!(out.max_residual <= residual_tol))
    throw NoRoot("derive_kaplan_constant: residual " + std::to_string(out.max_residual) +
                 " above tolerance (not H-type or convention mismatch)");
  return out;
}

ScalarField folland_solution(const HomNorm& norm) {
  const GroupSpec& spec = norm.group;
  if (spec.hom_dimension <= 2)
    throw InvalidArgument("folland_solution: requires Q > 2");
  const double expo = (2.0 - spec.hom_dimension) / 4.0;  // power of N^4
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  const double c = norm.c;
  return ScalarField::make(
      spec.name + "|u",
      [m, k, c, expo](auto x) {
        auto q = norm_quartic_eval(m, k, c, x);
        if (jm::scalar_value(q) == 0.0)
          throw AtOrigin("folland solution evaluated at the identity");
        return jm::pow(q, expo);
      },
      4.0 * expo);
}

SingularSolution u_p_solution(const HomNorm& norm, double p) {
  const GroupSpec& spec = norm.group;
  const int q = spec.hom_dimension;
  if (q <= 2) throw InvalidArgument("u_p: requires Q > 2");
  if (!(p > 1.0)) throw InvalidArgument("u_p: p must lie in (1, inf]");
  SingularSolution s;
  s.norm = norm;
  s.p = p;
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  const double c = norm.c;
  if (std::isinf(p)) {
    s.field = norm.field;
  } else if (p == static_cast<double>(q)) {
    s.field = ScalarField::make(
        spec.name + "|u_Q",
        [m, k, c](auto x) {
          auto qv = norm_quartic_eval(m, k, c, x);
          if (jm::scalar_value(qv) == 0.0)
            throw AtOrigin("u_Q evaluated at the identity");
          return jm::log(qv) * (-0.25);  // log(1/N) = -log(N)
        });
  } else {
    const double expo = (p - q) / (p - 1.0) / 4.0;
    s.field = ScalarField::make(
        spec.name + "|u_p",
        [m, k, c, expo](auto x) {
          auto qv = norm_quartic_eval(m, k, c, x);
          if (jm::scalar_value(qv) == 0.0)
            throw AtOrigin("u_p evaluated at the identity");
          return jm::pow(qv, expo);
        },
        4.0 * expo);
  }
  return s;
}

double folland_u(const HomNorm& norm, const Point& g) {
  check_point(norm.group, g);
  return folland_solution(norm).value(g.coords);
}

double u_p(const HomNorm& norm, double p, const Point& g) {
  check_point(norm.group, g);
  return u_p_solution(norm, p).field.value(g.coords);
}

}  // namespace carnot
