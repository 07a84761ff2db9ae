#pragma once

// Homogeneous quasi-norms and the singular solution family built on them.
//
// Step-two norms are the quartic family N_c = (||x||^4 + c ||z||^2)^{1/4};
// the constant c making N_c^{2-Q} harmonic for the sub-Laplacian is *derived*
// numerically (derive_kaplan_constant), never assumed. On Heisenberg groups
// the derivation lands on c = 1, the Koranyi norm. Euclidean groups use |x|.

#include <optional>

#include "carnot/field.hpp"
#include "carnot/group.hpp"

namespace carnot {

namespace detail {

/// N^4 evaluator: (sum x_i^2)^2 + c * sum z_l^2; smooth ambient polynomial.
template <class T>
T norm_quartic_eval(int m, int k, double c, std::span<const T> x) {
  T hsq = x[0] * x[0];
  for (int i = 1; i < m; ++i) hsq = hsq + x[i] * x[i];
  T q = hsq * hsq;
  for (int l = 0; l < k; ++l) q = q + c * (x[m + l] * x[m + l]);
  return q;
}

}  // namespace detail

enum class NormKind { Koranyi, Kaplan, EuclideanAbs };

struct HomNorm {
  GroupSpec group;
  NormKind kind = NormKind::EuclideanAbs;
  double c = 1.0;  // quartic-family constant (Kaplan); 1 for Koranyi

  ScalarField field;    // N, homogeneous of order one
  ScalarField quartic;  // N^4 for step two / |x|^4 for Euclidean (polynomial)

  double value(const Point& g) const { return field.value(g.coords); }
};

HomNorm koranyi_norm_for(const GroupSpec& heisenberg_spec);
HomNorm kaplan_norm(const GroupSpec& step_two_spec, double c);
HomNorm euclidean_norm(const GroupSpec& euclid_spec);

/// The natural norm of a builtin group: Koranyi on Heisenberg, Kaplan with a
/// derived constant on H-type, |x| on Euclidean.
HomNorm natural_norm(const GroupSpec& spec);

/// Koranyi norm value (||x||^4 + t^2)^{1/4}; Heisenberg groups only.
double koranyi_norm(const GroupSpec& spec, const Point& g);

struct KaplanDerivation {
  double c = 0.0;
  double max_residual = 0.0;  // max_i |L(N_c^{2-Q})| * N_c^Q over the sample
  int sample_size = 0;
  std::uint64_t seed = 0;
};

/// Finds c such that N_c^{2-Q} is annihilated by the sub-Laplacian, by 1-D
/// root-finding on the sign-aligned mean residual over a fixed sample.
/// Throws NoRoot if the max residual cannot be driven below `residual_tol`.
KaplanDerivation derive_kaplan_constant(const GroupSpec& spec,
                                        std::uint64_t seed = 0x4b61706c616eull,
                                        int sample_size = 64,
                                        double residual_tol = 1e-8);

struct SingularSolution {
  HomNorm norm;
  double p = 2.0;  // in (1, inf]; infinity encoded as std::numeric_limits::infinity
  ScalarField field;
};

/// u_p = N^{(p-Q)/(p-1)} for p != Q, log(1/N) at p = Q, N itself at p = inf.
SingularSolution u_p_solution(const HomNorm& norm, double p);

/// Folland-type solution u = N^{2-Q} (equals u_2).
ScalarField folland_solution(const HomNorm& norm);

double folland_u(const HomNorm& norm, const Point& g);
double u_p(const HomNorm& norm, double p, const Point& g);

}  // namespace carnot
