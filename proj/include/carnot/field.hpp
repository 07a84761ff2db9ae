#pragma once

// Type-erased scalar fields evaluable at several derivative orders. A field
// is created from one generic functor T f(std::span<const T>) which is
// instantiated at plain doubles and at jets; the two "coords given as jets"
// entry points are what derived fields (e.g. the squared horizontal gradient
// of another field) use to differentiate through an already-erased field.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "carnot/jet.hpp"
#include "carnot/types.hpp"

namespace carnot {

using jets::Jet1;
using jets::Jet2;

class ScalarField {
 public:
  ScalarField() = default;

  template <class F>
  static ScalarField make(std::string name, F f,
                          std::optional<double> homogeneity = std::nullopt) {
    ScalarField sf;
    sf.name_ = std::move(name);
    sf.homogeneity_ = homogeneity;
    sf.v_ = [f](std::span<const double> x) { return f(x); };
    sf.j1_ = [f](std::span<const double> x) {
      auto seeds = jets::seed_jet1(x);
      return f(std::span<const Jet1>(seeds.data(), seeds.size()));
    };
    sf.j2_ = [f](std::span<const double> x) {
      auto seeds = jets::seed_jet2(x);
      return f(std::span<const Jet2>(seeds.data(), seeds.size()));
    };
    sf.g1_ = [f](std::span<const Jet1> x) {
      auto seeds = jets::seed_jet1_like<Jet1>(x);
      return f(std::span<const jets::Jet1T<Jet1>>(seeds.data(), seeds.size()));
    };
    sf.g2_ = [f](std::span<const Jet2> x) {
      auto seeds = jets::seed_jet1_like<Jet2>(x);
      return f(std::span<const jets::Jet1T<Jet2>>(seeds.data(), seeds.size()));
    };
    return sf;
  }

  /// Erased field built from precomputed evaluation slots (derived fields).
  struct Slots {
    std::function<double(std::span<const double>)> value;
    std::function<Jet1(std::span<const double>)> jet1;
    std::function<Jet2(std::span<const double>)> jet2;
    std::function<jets::Jet1T<Jet1>(std::span<const Jet1>)> grad1;
    std::function<jets::Jet1T<Jet2>(std::span<const Jet2>)> grad2;
  };
  static ScalarField from_slots(std::string name, Slots s,
                                std::optional<double> homogeneity = std::nullopt) {
    ScalarField sf;
    sf.name_ = std::move(name);
    sf.homogeneity_ = homogeneity;
    sf.v_ = std::move(s.value);
    sf.j1_ = std::move(s.jet1);
    sf.j2_ = std::move(s.jet2);
    sf.g1_ = std::move(s.grad1);
    sf.g2_ = std::move(s.grad2);
    return sf;
  }

  const std::string& name() const { return name_; }
  std::optional<double> homogeneity() const { return homogeneity_; }
  bool valid() const { return static_cast<bool>(v_); }

  double value(const Vec& x) const { return v_({x.data(), static_cast<std::size_t>(x.size())}); }
  double value(std::span<const double> x) const { return v_(x); }

  Jet1 jet1(const Vec& x) const { return j1_({x.data(), static_cast<std::size_t>(x.size())}); }
  Jet2 jet2(const Vec& x) const { return j2_({x.data(), static_cast<std::size_t>(x.size())}); }

  /// First-order jet of the field where the coordinates are themselves jets.
  jets::Jet1T<Jet1> grad_over(std::span<const Jet1> x) const {
    if (!g1_) throw Error("field '" + name_ + "': nested evaluation unavailable");
    return g1_(x);
  }
  jets::Jet1T<Jet2> grad_over(std::span<const Jet2> x) const {
    if (!g2_) throw Error("field '" + name_ + "': nested evaluation unavailable");
    return g2_(x);
  }

 private:
  std::string name_;
  std::optional<double> homogeneity_;
  std::function<double(std::span<const double>)> v_;
  std::function<Jet1(std::span<const double>)> j1_;
  std::function<Jet2(std::span<const double>)> j2_;
  std::function<jets::Jet1T<Jet1>(std::span<const Jet1>)> g1_;
  std::function<jets::Jet1T<Jet2>(std::span<const Jet2>)> g2_;
};

/// Horizontal vector field given by m component fields w.r.t. the frame.
using HorizontalField = std::vector<ScalarField>;

inline Vec grad_of(const Jet1& j) {
  return Eigen::Map<const Vec>(j.g.data(), static_cast<long>(j.g.size()));
}
inline Vec grad_of(const Jet2& j) {
  return Eigen::Map<const Vec>(j.g.data(), static_cast<long>(j.g.size()));
}
inline Mat hess_of(const Jet2& j) {
  const int d = j.dim();
  Mat h(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k <= i; ++k) h(i, k) = h(k, i) = j.h[jets::hidx(i, k)];
  return h;
}

}  // namespace carnot
