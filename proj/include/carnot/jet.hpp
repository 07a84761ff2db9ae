#pragma once

// Forward-mode jets carrying exact first- and second-order derivatives.
//
// Jet1T<S> holds value + gradient, Jet2T<S> additionally the Hessian stored
// as a packed lower triangle (symmetry holds by construction, never by
// post-hoc symmetrization). The scalar type S may itself be a jet, which is
// how third-order information is obtained where a single operation needs it
// (nesting Jet1T inside a field evaluation).

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace carnot::jets {

inline double scalar_value(double x) { return x; }

template <class S>
struct Jet1T {
  S v{};
  std::vector<S> g;

  int dim() const { return static_cast<int>(g.size()); }
};

template <class S>
struct Jet2T {
  S v{};
  std::vector<S> g;
  std::vector<S> h;  // packed lower triangle, h[i*(i+1)/2 + j], i >= j

  int dim() const { return static_cast<int>(g.size()); }
};

inline constexpr std::size_t hidx(std::size_t i, std::size_t j) {
  return i * (i + 1) / 2 + j;  // requires i >= j
}
inline constexpr std::size_t hsize(std::size_t d) { return d * (d + 1) / 2; }

template <class S>
double scalar_value(const Jet1T<S>& a) {
  return scalar_value(a.v);
}
template <class S>
double scalar_value(const Jet2T<S>& a) {
  return scalar_value(a.v);
}

// Shape-preserving constants, built from an exemplar so nested jets keep
// their inner dimensions.
inline double zero_like(double) { return 0.0; }
inline double one_like(double) { return 1.0; }
template <class T>
T zero_like(const T& t) {
  return t * 0.0;
}
template <class T>
T one_like(const T& t) {
  return t * 0.0 + 1.0;
}

// ---------------------------------------------------------------- Jet1T ops

template <class S>
Jet1T<S> operator+(const Jet1T<S>& a, const Jet1T<S>& b) {
  Jet1T<S> r;
  r.v = a.v + b.v;
  r.g.reserve(a.g.size());
  for (std::size_t i = 0; i < a.g.size(); ++i) r.g.push_back(a.g[i] + b.g[i]);
  return r;
}

template <class S>
Jet1T<S> operator-(const Jet1T<S>& a, const Jet1T<S>& b) {
  Jet1T<S> r;
  r.v = a.v - b.v;
  r.g.reserve(a.g.size());
  for (std::size_t i = 0; i < a.g.size(); ++i) r.g.push_back(a.g[i] - b.g[i]);
  return r;
}

template <class S>
Jet1T<S> operator-(const Jet1T<S>& a) {
  Jet1T<S> r;
  r.v = -a.v;
  r.g.reserve(a.g.size());
  for (auto& gi : a.g) r.g.push_back(-gi);
  return r;
}

template <class S>
Jet1T<S> operator*(const Jet1T<S>& a, const Jet1T<S>& b) {
  Jet1T<S> r;
  r.v = a.v * b.v;
  r.g.reserve(a.g.size());
  for (std::size_t i = 0; i < a.g.size(); ++i)
    r.g.push_back(a.v * b.g[i] + b.v * a.g[i]);
  return r;
}

template <class S>
Jet1T<S> operator+(const Jet1T<S>& a, double c) {
  Jet1T<S> r = a;
  r.v = r.v + c;
  return r;
}
template <class S>
Jet1T<S> operator+(double c, const Jet1T<S>& a) {
  return a + c;
}
template <class S>
Jet1T<S> operator-(const Jet1T<S>& a, double c) {
  return a + (-c);
}
template <class S>
Jet1T<S> operator-(double c, const Jet1T<S>& a) {
  return (-a) + c;
}
template <class S>
Jet1T<S> operator*(const Jet1T<S>& a, double c) {
  Jet1T<S> r;
  r.v = a.v * c;
  r.g.reserve(a.g.size());
  for (auto& gi : a.g) r.g.push_back(gi * c);
  return r;
}
template <class S>
Jet1T<S> operator*(double c, const Jet1T<S>& a) {
  return a * c;
}
template <class S>
Jet1T<S> operator/(const Jet1T<S>& a, double c) {
  return a * (1.0 / c);
}

inline double recip(double x) { return 1.0 / x; }

template <class S>
Jet1T<S> recip(const Jet1T<S>& a) {
  Jet1T<S> r;
  S w = recip(a.v);
  S m = w * w;
  r.v = w;
  r.g.reserve(a.g.size());
  for (auto& gi : a.g) r.g.push_back(-(m * gi));
  return r;
}

template <class S>
Jet1T<S> operator/(const Jet1T<S>& a, const Jet1T<S>& b) {
  return a * recip(b);
}
template <class S>
Jet1T<S> operator/(double c, const Jet1T<S>& b) {
  return recip(b) * c;
}

// First-order chain rule with precomputed f(v), f'(v).
template <class S>
Jet1T<S> chain1(const Jet1T<S>& a, S f0, S f1) {
  Jet1T<S> r;
  r.v = std::move(f0);
  r.g.reserve(a.g.size());
  for (auto& gi : a.g) r.g.push_back(f1 * gi);
  return r;
}

template <class S>
Jet1T<S> sqrt(const Jet1T<S>& a) {
  using std::sqrt;
  S s = sqrt(a.v);
  S f1 = recip(s + s);
  return chain1(a, s, f1);
}
template <class S>
Jet1T<S> exp(const Jet1T<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return chain1(a, e, e);
}
template <class S>
Jet1T<S> log(const Jet1T<S>& a) {
  using std::log;
  return chain1(a, log(a.v), recip(a.v));
}
template <class S>
Jet1T<S> pow(const Jet1T<S>& a, double c) {
  using std::pow;
  S f0 = pow(a.v, c);
  S f1 = pow(a.v, c - 1.0) * c;
  return chain1(a, f0, f1);
}
template <class S>
Jet1T<S> sin(const Jet1T<S>& a) {
  using std::cos;
  using std::sin;
  return chain1(a, sin(a.v), cos(a.v));
}
template <class S>
Jet1T<S> cos(const Jet1T<S>& a) {
  using std::cos;
  using std::sin;
  return chain1(a, cos(a.v), -sin(a.v));
}
template <class S>
Jet1T<S> asin(const Jet1T<S>& a) {
  using std::asin;
  using std::sqrt;
  S w = recip(sqrt(1.0 - a.v * a.v));
  return chain1(a, asin(a.v), w);
}

// ---------------------------------------------------------------- Jet2T ops

template <class S>
Jet2T<S> operator+(const Jet2T<S>& a, const Jet2T<S>& b) {
  Jet2T<S> r;
  r.v = a.v + b.v;
  r.g.reserve(a.g.size());
  r.h.reserve(a.h.size());
  for (std::size_t i = 0; i < a.g.size(); ++i) r.g.push_back(a.g[i] + b.g[i]);
  for (std::size_t i = 0; i < a.h.size(); ++i) r.h.push_back(a.h[i] + b.h[i]);
  return r;
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a, const Jet2T<S>& b) {
  Jet2T<S> r;
  r.v = a.v - b.v;
  r.g.reserve(a.g.size());
  r.h.reserve(a.h.size());
  for (std::size_t i = 0; i < a.g.size(); ++i) r.g.push_back(a.g[i] - b.g[i]);
  for (std::size_t i = 0; i < a.h.size(); ++i) r.h.push_back(a.h[i] - b.h[i]);
  return r;
}

template <class S>
Jet2T<S> operator-(const Jet2T<S>& a) {
  Jet2T<S> r;
  r.v = -a.v;
  r.g.reserve(a.g.size());
  r.h.reserve(a.h.size());
  for (auto& x : a.g) r.g.push_back(-x);
  for (auto& x : a.h) r.h.push_back(-x);
  return r;
}

template <class S>
Jet2T<S> operator*(const Jet2T<S>& a, const Jet2T<S>& b) {
  Jet2T<S> r;
  const std::size_t d = a.g.size();
  r.v = a.v * b.v;
  r.g.reserve(d);
  r.h.reserve(a.h.size());
  for (std::size_t i = 0; i < d; ++i) r.g.push_back(a.v * b.g[i] + b.v * a.g[i]);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      r.h.push_back(a.v * b.h[hidx(i, j)] + b.v * a.h[hidx(i, j)] +
                    a.g[i] * b.g[j] + a.g[j] * b.g[i]);
  return r;
}

template <class S>
Jet2T<S> operator+(const Jet2T<S>& a, double c) {
  Jet2T<S> r = a;
  r.v = r.v + c;
  return r;
}
template <class S>
Jet2T<S> operator+(double c, const Jet2T<S>& a) {
  return a + c;
}
template <class S>
Jet2T<S> operator-(const Jet2T<S>& a, double c) {
  return a + (-c);
}
template <class S>
Jet2T<S> operator-(double c, const Jet2T<S>& a) {
  return (-a) + c;
}
template <class S>
Jet2T<S> operator*(const Jet2T<S>& a, double c) {
  Jet2T<S> r;
  r.v = a.v * c;
  r.g.reserve(a.g.size());
  r.h.reserve(a.h.size());
  for (auto& x : a.g) r.g.push_back(x * c);
  for (auto& x : a.h) r.h.push_back(x * c);
  return r;
}
template <class S>
Jet2T<S> operator*(double c, const Jet2T<S>& a) {
  return a * c;
}
template <class S>
Jet2T<S> operator/(const Jet2T<S>& a, double c) {
  return a * (1.0 / c);
}

template <class S>
Jet2T<S> recip(const Jet2T<S>& a) {
  Jet2T<S> r;
  const std::size_t d = a.g.size();
  S w = recip(a.v);
  S m = w * w;          // 1/v^2
  S m3 = (m * w) * 2.0;  // 2/v^3
  r.v = w;
  r.g.reserve(d);
  r.h.reserve(a.h.size());
  for (auto& gi : a.g) r.g.push_back(-(m * gi));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      r.h.push_back(m3 * (a.g[i] * a.g[j]) - m * a.h[hidx(i, j)]);
  return r;
}

template <class S>
Jet2T<S> operator/(const Jet2T<S>& a, const Jet2T<S>& b) {
  return a * recip(b);
}
template <class S>
Jet2T<S> operator/(double c, const Jet2T<S>& b) {
  return recip(b) * c;
}

// Second-order chain rule with precomputed f(v), f'(v), f''(v).
template <class S>
Jet2T<S> chain2(const Jet2T<S>& a, S f0, S f1, S f2) {
  Jet2T<S> r;
  const std::size_t d = a.g.size();
  r.v = std::move(f0);
  r.g.reserve(d);
  r.h.reserve(a.h.size());
  for (auto& gi : a.g) r.g.push_back(f1 * gi);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      r.h.push_back(f1 * a.h[hidx(i, j)] + f2 * (a.g[i] * a.g[j]));
  return r;
}

template <class S>
Jet2T<S> sqrt(const Jet2T<S>& a) {
  using std::sqrt;
  S s = sqrt(a.v);
  S f1 = recip(s + s);                    //  1/(2 sqrt)
  S f2 = -(f1 * recip(a.v)) * 0.5;        // -1/(4 v sqrt)
  return chain2(a, s, f1, f2);
}
template <class S>
Jet2T<S> exp(const Jet2T<S>& a) {
  using std::exp;
  S e = exp(a.v);
  return chain2(a, e, e, e);
}
template <class S>
Jet2T<S> log(const Jet2T<S>& a) {
  using std::log;
  S f1 = recip(a.v);
  return chain2(a, log(a.v), f1, -(f1 * f1));
}
template <class S>
Jet2T<S> pow(const Jet2T<S>& a, double c) {
  using std::pow;
  S f0 = pow(a.v, c);
  S f1 = pow(a.v, c - 1.0) * c;
  S f2 = pow(a.v, c - 2.0) * (c * (c - 1.0));
  return chain2(a, f0, f1, f2);
}
template <class S>
Jet2T<S> sin(const Jet2T<S>& a) {
  using std::cos;
  using std::sin;
  S s = sin(a.v), c = cos(a.v);
  return chain2(a, s, c, -s);
}
template <class S>
Jet2T<S> cos(const Jet2T<S>& a) {
  using std::cos;
  using std::sin;
  S s = sin(a.v), c = cos(a.v);
  return chain2(a, c, -s, -c);
}
template <class S>
Jet2T<S> asin(const Jet2T<S>& a) {
  using std::asin;
  using std::sqrt;
  S f1 = recip(sqrt(1.0 - a.v * a.v));
  S f2 = a.v * (f1 * f1 * f1);
  return chain2(a, asin(a.v), f1, f2);
}

// ----------------------------------------------------------------- seeding

using Jet1 = Jet1T<double>;
using Jet2 = Jet2T<double>;
using Jet2N = Jet2T<Jet1T<double>>;  // second order over first-order scalars

template <class T>
std::vector<Jet1T<T>> seed_jet1_like(std::span<const T> x) {
  const std::size_t d = x.size();
  std::vector<Jet1T<T>> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i].v = x[i];
    out[i].g.reserve(d);
    for (std::size_t j = 0; j < d; ++j)
      out[i].g.push_back(i == j ? one_like(x[0]) : zero_like(x[0]));
  }
  return out;
}

template <class T>
std::vector<Jet2T<T>> seed_jet2_like(std::span<const T> x) {
  const std::size_t d = x.size();
  std::vector<Jet2T<T>> out(d);
  for (std::size_t i = 0; i < d; ++i) {
    out[i].v = x[i];
    out[i].g.reserve(d);
    out[i].h.assign(hsize(d), zero_like(x[0]));
    for (std::size_t j = 0; j < d; ++j)
      out[i].g.push_back(i == j ? one_like(x[0]) : zero_like(x[0]));
  }
  return out;
}

inline std::vector<Jet1> seed_jet1(std::span<const double> x) {
  return seed_jet1_like<double>(x);
}
inline std::vector<Jet2> seed_jet2(std::span<const double> x) {
  return seed_jet2_like<double>(x);
}

}  // namespace carnot::jets

// Math entry points usable from generic field code. Call as jm::sqrt(x) etc.;
// resolves to std:: for double and to the jet overloads for jets.
namespace carnot::jm {
using std::asin;
using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using carnot::jets::asin;
using carnot::jets::cos;
using carnot::jets::exp;
using carnot::jets::log;
using carnot::jets::pow;
using carnot::jets::sin;
using carnot::jets::sqrt;
using carnot::jets::scalar_value;
}  // namespace carnot::jm
