#pragma once

// Horizontal differential operators built on exact jets: gradient ∇_0,
// divergence div_0, sub-Laplacian L, ∞-Laplacian L_inf and p-Laplacian L_p.

#include <cmath>

#include "carnot/field.hpp"
#include "carnot/group.hpp"

namespace carnot {

namespace detail {

// ||∇_0 f||^2 over generic outer scalars; the inner differentiation of f
// happens through the field's jet entry points.
template <class S>
S gradsq_eval(const GroupSpec& spec, const ScalarField& f, std::span<const S> x) {
  const int m = spec.m();
  auto frame = frame_coefficients_t<S>(spec, x);
  std::vector<S> fgrad;
  if constexpr (std::is_same_v<S, double>) {
    Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size()));
    fgrad = f.jet1(xv).g;
  } else {
    fgrad = f.grad_over(x).g;
  }
  S acc = jets::zero_like(x[0]);
  for (int i = 0; i < m; ++i) {
    S xi = jets::zero_like(x[0]);
    for (std::size_t j = 0; j < x.size(); ++j) xi = xi + frame[i][j] * fgrad[j];
    acc = acc + xi * xi;
  }
  return acc;
}

template <class S>
S hgrad_component_eval(const GroupSpec& spec, const ScalarField& f, int comp,
                       std::span<const S> x) {
  auto frame = frame_coefficients_t<S>(spec, x);
  std::vector<S> fgrad;
  if constexpr (std::is_same_v<S, double>) {
    Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size()));
    fgrad = f.jet1(xv).g;
  } else {
    fgrad = f.grad_over(x).g;
  }
  S acc = jets::zero_like(x[0]);
  for (std::size_t j = 0; j < x.size(); ++j) acc = acc + frame[comp][j] * fgrad[j];
  return acc;
}

template <class S>
S weighted_component_eval(const GroupSpec& spec, const ScalarField& f, double p,
                          int comp, std::span<const S> x) {
  const int m = spec.m();
  auto frame = frame_coefficients_t<S>(spec, x);
  std::vector<S> fgrad;
  if constexpr (std::is_same_v<S, double>) {
    Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size()));
    fgrad = f.jet1(xv).g;
  } else {
    fgrad = f.grad_over(x).g;
  }
  std::vector<S> comps;
  comps.reserve(m);
  S gsq = jets::zero_like(x[0]);
  for (int i = 0; i < m; ++i) {
    S xi = jets::zero_like(x[0]);
    for (std::size_t j = 0; j < x.size(); ++j) xi = xi + frame[i][j] * fgrad[j];
    gsq = gsq + xi * xi;
    comps.push_back(std::move(xi));
  }
  S w = jm::pow(gsq, 0.5 * (p - 2.0));
  return w * comps[comp];
}

}  // namespace detail

/// ||∇_0 f||^2 as a first-class field (differentiable one more time through
/// the nested entry points of f).
inline ScalarField gradsq_field(const GroupSpec& spec, const ScalarField& f) {
  ScalarField::Slots s;
  s.value = [&spec, f](std::span<const double> x) {
    return detail::gradsq_eval<double>(spec, f, x);
  };
  s.jet1 = [&spec, f](std::span<const double> x) {
    auto seeds = jets::seed_jet1(x);
    return detail::gradsq_eval<Jet1>(spec, f, {seeds.data(), seeds.size()});
  };
  s.jet2 = [&spec, f](std::span<const double> x) {
    auto seeds = jets::seed_jet2(x);
    return detail::gradsq_eval<Jet2>(spec, f, {seeds.data(), seeds.size()});
  };
  return ScalarField::from_slots(f.name() + "|hgrad_sq", std::move(s));
}

/// The m component fields of ∇_0 f.
inline HorizontalField hgrad_fields(const GroupSpec& spec, const ScalarField& f) {
  HorizontalField out;
  for (int i = 0; i < spec.m(); ++i) {
    ScalarField::Slots s;
    s.value = [&spec, f, i](std::span<const double> x) {
      return detail::hgrad_component_eval<double>(spec, f, i, x);
    };
    s.jet1 = [&spec, f, i](std::span<const double> x) {
      auto seeds = jets::seed_jet1(x);
      return detail::hgrad_component_eval<Jet1>(spec, f, i, {seeds.data(), seeds.size()});
    };
    s.jet2 = [&spec, f, i](std::span<const double> x) {
      auto seeds = jets::seed_jet2(x);
      return detail::hgrad_component_eval<Jet2>(spec, f, i, {seeds.data(), seeds.size()});
    };
    out.push_back(ScalarField::from_slots(
        f.name() + "|X" + std::to_string(i + 1), std::move(s)));
  }
  return out;
}

/// Components of ||∇_0 f||^{p-2} ∇_0 f.
inline HorizontalField weighted_hgrad_fields(const GroupSpec& spec,
                                             const ScalarField& f, double p) {
  HorizontalField out;
  for (int i = 0; i < spec.m(); ++i) {
    ScalarField::Slots s;
    s.value = [&spec, f, p, i](std::span<const double> x) {
      return detail::weighted_component_eval<double>(spec, f, p, i, x);
    };
    s.jet1 = [&spec, f, p, i](std::span<const double> x) {
      auto seeds = jets::seed_jet1(x);
      return detail::weighted_component_eval<Jet1>(spec, f, p, i,
                                                   {seeds.data(), seeds.size()});
    };
    s.jet2 = [&spec, f, p, i](std::span<const double> x) {
      auto seeds = jets::seed_jet2(x);
      return detail::weighted_component_eval<Jet2>(spec, f, p, i,
                                                   {seeds.data(), seeds.size()});
    };
    out.push_back(ScalarField::from_slots(
        f.name() + "|w" + std::to_string(i + 1), std::move(s)));
  }
  return out;
}

/// Horizontal gradient ∇_0 f(g) = (X_1 f, ..., X_m f).
inline HorizontalVector hgrad(const GroupSpec& spec, const ScalarField& f,
                              const Point& g) {
  check_point(spec, g);
  Jet1 fj = f.jet1(g.coords);
  auto frame = frame_coefficients(spec, g);
  Vec comp(spec.m());
  Vec grad = grad_of(fj);
  for (int i = 0; i < spec.m(); ++i) comp[i] = frame[i].dot(grad);
  return HorizontalVector(std::move(comp));
}

/// Horizontal divergence div_0 V = sum_i X_i(a_i) of V = sum_i a_i X_i.
inline double hdiv(const GroupSpec& spec, const HorizontalField& v, const Point& g) {
  check_point(spec, g);
  if (static_cast<int>(v.size()) != spec.m())
    throw DimensionMismatch("hdiv: expected " + std::to_string(spec.m()) +
                            " components, got " + std::to_string(v.size()));
  auto frame = frame_coefficients(spec, g);
  double acc = 0.0;
  for (int i = 0; i < spec.m(); ++i)
    acc += frame[i].dot(grad_of(v[static_cast<std::size_t>(i)].jet1(g.coords)));
  return acc;
}

/// Sub-Laplacian L f = sum_i X_i^2 f. Assembled from one second-order jet of
/// f plus the frame coefficients differentiated by AD; when f supports nested
/// evaluation the literal div_0(∇_0 f) route is computed as well and the two
/// must agree to 1e-12 (relative).
inline double sublaplacian(const GroupSpec& spec, const ScalarField& f,
                           const Point& g, bool cross_check = true) {
  check_point(spec, g);
  const int n = spec.dim(), m = spec.m();
  Jet2 fj = f.jet2(g.coords);
  Mat hess = hess_of(fj);
  Vec grad = grad_of(fj);

  std::span<const double> xs(g.coords.data(), static_cast<std::size_t>(n));
  auto seeds = jets::seed_jet1(xs);
  auto frame_j = frame_coefficients_t<Jet1>(spec, {seeds.data(), seeds.size()});

  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    Vec ci(n);
    for (int j = 0; j < n; ++j) ci[j] = frame_j[i][static_cast<std::size_t>(j)].v;
    acc += ci.dot(hess * ci);
    // drift term: sum_{l,j} c_il (d_l c_ij) (d_j f)
    for (int j = 0; j < n; ++j) {
      double dij = 0.0;
      for (int l = 0; l < n; ++l)
        dij += ci[l] * frame_j[i][static_cast<std::size_t>(j)].g[static_cast<std::size_t>(l)];
      acc += dij * grad[j];
    }
  }

  if (cross_check) {
    const double literal = hdiv(spec, hgrad_fields(spec, f), g);
    const double scale = std::max({1.0, std::abs(acc), std::abs(literal)});
    if (std::abs(acc - literal) > 1e-12 * scale)
      throw ToleranceNotMet("sublaplacian: expanded and literal routes disagree for '" +
                            f.name() + "'");
  }
  return acc;
}

/// ∞-Laplacian, computed literally as 0.5 <∇_0(||∇_0 f||^2), ∇_0 f>.
inline double infty_laplacian(const GroupSpec& spec, const ScalarField& f,
                              const Point& g) {
  ScalarField h = gradsq_field(spec, f);
  HorizontalVector gh = hgrad(spec, h, g);
  HorizontalVector gf = hgrad(spec, f, g);
  return 0.5 * gh.dot(gf);
}

inline constexpr double kVanishingGradientTol = 1e-12;

/// p-Laplacian in expanded form:
///   L_p f = ||∇_0 f||^{p-2} L f + (p-2) ||∇_0 f||^{p-4} L_inf f.
inline double p_laplacian(const GroupSpec& spec, const ScalarField& f,
                          const Point& g, double p) {
  if (!(p > 1.0) || !std::isfinite(p))
    throw InvalidArgument("p_laplacian: p must lie in (1, inf)");
  if (p == 2.0) return sublaplacian(spec, f, g);
  const double gn2 = hgrad(spec, f, g).squaredNorm();
  if (std::sqrt(gn2) < kVanishingGradientTol)
    throw VanishingGradient("p_laplacian: ||∇_0 f|| < 1e-12 at evaluation point");
  const double lap = sublaplacian(spec, f, g);
  const double linf = infty_laplacian(spec, f, g);
  return std::pow(gn2, 0.5 * (p - 2.0)) * lap +
         (p - 2.0) * std::pow(gn2, 0.5 * (p - 4.0)) * linf;
}

/// Literal route div_0(||∇_0 f||^{p-2} ∇_0 f) by nested differentiation;
/// kept as an independent cross-check of the expanded formula.
inline double p_laplacian_literal(const GroupSpec& spec, const ScalarField& f,
                                  const Point& g, double p) {
  return hdiv(spec, weighted_hgrad_fields(spec, f, p), g);
}

}  // namespace carnot
