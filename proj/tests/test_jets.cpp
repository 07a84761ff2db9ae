#include <doctest.h>

#include <cmath>
#include <vector>

#include "carnot/field.hpp"
#include "carnot/jet.hpp"
#include "carnot/rng.hpp"

using namespace carnot;
using jets::Jet1;
using jets::Jet2;

namespace {

// Random composite expressions over d variables; the finite-difference
// oracle below is the independent check of the jet arithmetic.
struct ExprNode {
  int op;     // 0 leaf, 1 const, 2 +, 3 -, 4 *, 5 /, 6 sin, 7 cos, 8 exp, 9 log, 10 pow
  int a = -1, b = -1;
  double c = 0.0;
};

std::vector<ExprNode> random_expr(int d, int size, rng::SplitMix& sm) {
  std::vector<ExprNode> nodes;
  for (int i = 0; i < d; ++i) nodes.push_back({0, -1, -1, static_cast<double>(i)});
  nodes.push_back({1, -1, -1, 1.7});
  while (static_cast<int>(nodes.size()) < size) {
    ExprNode n;
    n.op = 2 + static_cast<int>(sm.below(9));
    n.a = static_cast<int>(sm.below(nodes.size()));
    n.b = static_cast<int>(sm.below(nodes.size()));
    n.c = 0.5 + sm.uniform() * 2.0;
    nodes.push_back(n);
  }
  return nodes;
}

template <class T>
T eval_expr(const std::vector<ExprNode>& nodes, std::span<const T> x) {
  std::vector<T> vals;
  vals.reserve(nodes.size());
  for (const auto& n : nodes) {
    switch (n.op) {
      case 0: vals.push_back(x[static_cast<std::size_t>(n.c)]); break;
      case 1: vals.push_back(jets::zero_like(x[0]) + n.c); break;
      case 2: vals.push_back(vals[n.a] + vals[n.b]); break;
      case 3: vals.push_back(vals[n.a] - vals[n.b]); break;
      case 4: vals.push_back(vals[n.a] * vals[n.b]); break;
      case 5: vals.push_back(vals[n.a] / (vals[n.b] * vals[n.b] + 1.5)); break;
      case 6: vals.push_back(jm::sin(vals[n.a])); break;
      case 7: vals.push_back(jm::cos(vals[n.a])); break;
      case 8: vals.push_back(jm::exp(vals[n.a] * 0.3)); break;
      case 9: vals.push_back(jm::log(vals[n.a] * vals[n.a] + 1.2)); break;
      default: vals.push_back(jm::pow(vals[n.a] * vals[n.a] + 1.1, n.c)); break;
    }
  }
  return vals.back();
}

double eval_at(const std::vector<ExprNode>& nodes, Vec x) {
  std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  return eval_expr<double>(nodes, xs);
}

}  // namespace

TEST_SUITE("jets") {

TEST_CASE("gradients and hessians match central finite differences") {
  rng::SplitMix sm(0xabcdef12u);
  const double h = 1e-5;
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(sm.below(3));
    auto nodes = random_expr(d, d + 8, sm);
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = -1.0 + 2.0 * sm.uniform();

    ScalarField f = ScalarField::make(
        "rand", [nodes](auto xs) { return eval_expr(nodes, xs); });
    Jet2 j = f.jet2(x);
    const double scale = std::max(1.0, std::abs(j.v));

    for (int i = 0; i < d; ++i) {
      Vec xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fd = (eval_at(nodes, xp) - eval_at(nodes, xm)) / (2 * h);
      CHECK(std::abs(j.g[static_cast<std::size_t>(i)] - fd) <= 1e-7 * scale);
    }
    for (int i = 0; i < d; ++i)
      for (int k = 0; k <= i; ++k) {
        Vec xpp = x, xpm = x, xmp = x, xmm = x;
        xpp[i] += h; xpp[k] += h;
        xpm[i] += h; xpm[k] -= h;
        xmp[i] -= h; xmp[k] += h;
        xmm[i] -= h; xmm[k] -= h;
        const double fd = (eval_at(nodes, xpp) - eval_at(nodes, xpm) -
                           eval_at(nodes, xmp) + eval_at(nodes, xmm)) /
                          (4 * h * h);
        CHECK(std::abs(j.h[jets::hidx(static_cast<std::size_t>(i),
                                      static_cast<std::size_t>(k))] -
                       fd) <= 1e-4 * scale);
      }
    ++checked;
  }
  CHECK(checked == 100);
}

TEST_CASE("hessian is symmetric by construction") {
  // Packed lower-triangular storage: the full matrix view mirrors exactly.
  ScalarField f = ScalarField::make("g", [](auto x) {
    return jm::sin(x[0] * x[1]) + jm::exp(x[2] * 0.3) * x[0];
  });
  Vec x(3);
  x << 0.3, -1.2, 0.7;
  Mat hess = hess_of(f.jet2(x));
  CHECK((hess - hess.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("nested first-order jets reproduce the hessian") {
  ScalarField f = ScalarField::make("g", [](auto x) {
    return x[0] * jm::cos(x[1]) + jm::pow(x[0] * x[0] + 0.5, 1.3);
  });
  Vec x(2);
  x << 0.8, -0.4;
  Jet2 j2 = f.jet2(x);

  std::span<const double> xs(x.data(), 2);
  auto outer = jets::seed_jet1(xs);
  auto nested = f.grad_over(std::span<const Jet1>(outer.data(), outer.size()));
  // nested.g[i] is d_i f carrying its own gradient = the i-th hessian row.
  for (int i = 0; i < 2; ++i) {
    CHECK(nested.g[static_cast<std::size_t>(i)].v ==
          doctest::Approx(j2.g[static_cast<std::size_t>(i)]).epsilon(1e-14));
    for (int k = 0; k < 2; ++k) {
      const auto hi = std::max(i, k), lo = std::min(i, k);
      CHECK(nested.g[static_cast<std::size_t>(i)].g[static_cast<std::size_t>(k)] ==
            doctest::Approx(j2.h[jets::hidx(static_cast<std::size_t>(hi),
                                            static_cast<std::size_t>(lo))])
                .epsilon(1e-13));
    }
  }
}

TEST_CASE("product and chain rules are exact on closed forms") {
  // (x e^y)' checks the product rule; sqrt(x^2+y^2) the chain rule.
  ScalarField f = ScalarField::make("h", [](auto x) { return x[0] * jm::exp(x[1]); });
  Vec x(2);
  x << 2.0, 0.5;
  Jet2 j = f.jet2(x);
  const double ey = std::exp(0.5);
  CHECK(j.g[0] == doctest::Approx(ey).epsilon(1e-15));
  CHECK(j.g[1] == doctest::Approx(2.0 * ey).epsilon(1e-15));
  CHECK(j.h[jets::hidx(1, 0)] == doctest::Approx(ey).epsilon(1e-15));
  CHECK(j.h[jets::hidx(1, 1)] == doctest::Approx(2.0 * ey).epsilon(1e-15));

  ScalarField r = ScalarField::make(
      "r", [](auto x2) { return jm::sqrt(x2[0] * x2[0] + x2[1] * x2[1]); });
  Vec y(2);
  y << 3.0, 4.0;
  Jet2 jr = r.jet2(y);
  CHECK(jr.v == doctest::Approx(5.0));
  CHECK(jr.g[0] == doctest::Approx(0.6));
  CHECK(jr.g[1] == doctest::Approx(0.8));
  CHECK(jr.h[jets::hidx(0, 0)] == doctest::Approx(16.0 / 125.0));
  CHECK(jr.h[jets::hidx(1, 0)] == doctest::Approx(-12.0 / 125.0));
}

}  // TEST_SUITE
