#pragma once

// Carnot groups as data. Every step-two group is stored uniformly as
// (m, k, J_1..J_k) with J_l skew m x m:
//
//   multiply:  (x,z)*(x',z') = (x + x', z_l + z'_l + x^T J_l x')
//   frame:     X_i = d/dx_i + sum_l (J_l x)_i d/dz_l
//   dilation:  x -> lambda x,  z -> lambda^2 z
//
// Heisenberg(n) uses J_1 = [[0, 2I_n], [-2I_n, 0]], which reproduces the
// classical group law (x,t)*(x',t') = (x+x', t+t'+2 sum_j (x_j x'_{n+j} -
// x_{n+j} x'_j)), the frame X_j = d/dx_j + 2 x_{n+j} d/dt, X_{n+j} =
// d/dx_{n+j} - 2 x_j d/dt and the commutators [X_j, X_{n+j}] = -4T.
// Euclidean R^n is the abelian case (k = 0).

#include <span>
#include <string>
#include <vector>

#include "carnot/jet.hpp"
#include "carnot/types.hpp"

namespace carnot {

enum class GroupKind { Heisenberg, HType, Euclidean, StepTwoGeneric };

struct GroupSpec {
  std::string name;
  int step = 1;
  std::vector<int> layer_dims;  // dim v_1, ..., dim v_step
  int hom_dimension = 0;        // Q = sum j * dim v_j
  GroupKind kind = GroupKind::Euclidean;

  int heis_n = 0;            // Heisenberg only
  std::vector<Mat> jmaps;    // k skew m x m matrices (step two)
  std::vector<Mat> bracket;  // structure constants as given (StepTwoGeneric)
  double clifford_scale = 0.0;  // lambda with (sum z_l J_l)^2 = -lambda^2 I; 0 if n/a

  int m() const { return layer_dims.empty() ? 0 : layer_dims[0]; }
  int k() const { return layer_dims.size() > 1 ? layer_dims[1] : 0; }
  int dim() const {
    int n = 0;
    for (int d : layer_dims) n += d;
    return n;
  }
  bool is_step_two() const { return step == 2; }
};

GroupSpec make_heisenberg(int n);
GroupSpec make_htype(std::string name, std::vector<Mat> jmaps);
GroupSpec make_euclidean(int n);
GroupSpec make_step_two(std::string name, std::vector<Mat> structure_constants);

/// Built-in groups: heis1, heis2, quaternionic, euclid3, euclid5.
const GroupSpec& builtin_group(const std::string& name);
std::vector<std::string> builtin_group_names();

Point identity(const GroupSpec& spec);
Point multiply(const GroupSpec& spec, const Point& g, const Point& h);
Point inverse(const GroupSpec& spec, const Point& g);
Point dilate(const GroupSpec& spec, double lambda, const Point& g);

/// Ambient coefficient vectors of the frame X_1..X_m at g (each of length N).
std::vector<Vec> frame_coefficients(const GroupSpec& spec, const Point& g);

void check_point(const GroupSpec& spec, const Point& g);

// --- generic (jet-evaluable) versions -------------------------------------

template <class T>
std::vector<T> multiply_t(const GroupSpec& spec, std::span<const T> g,
                          std::span<const T> h) {
  const int m = spec.m(), k = spec.k();
  std::vector<T> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out.push_back(g[i] + h[i]);
  for (int l = 0; l < k; ++l) {
    const Mat& J = spec.jmaps[l];
    T acc = out[m + l];  // x-block already summed; reuse as accumulator base
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (J(i, j) != 0.0) acc = acc + J(i, j) * (g[i] * h[j]);
    out[m + l] = acc;
  }
  return out;
}

template <class T>
std::vector<T> dilate_t(const GroupSpec& spec, double lambda, std::span<const T> g) {
  const int m = spec.m();
  std::vector<T> out;
  out.reserve(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out.push_back(g[i] * (static_cast<int>(i) < m || spec.step == 1
                              ? lambda
                              : lambda * lambda));
  return out;
}

/// frame_coefficients over generic scalars; result[i][j] is the d/dx_j
/// coefficient of X_i. Constant entries are materialized with zero_like /
/// one_like so nested jet shapes are preserved.
template <class T>
std::vector<std::vector<T>> frame_coefficients_t(const GroupSpec& spec,
                                                 std::span<const T> x) {
  using jets::one_like;
  using jets::zero_like;
  const int m = spec.m(), k = spec.k(), n = static_cast<int>(x.size());
  std::vector<std::vector<T>> frame(m);
  for (int i = 0; i < m; ++i) {
    auto& row = frame[i];
    row.reserve(n);
    for (int j = 0; j < n; ++j)
      row.push_back(i == j ? one_like(x[0]) : zero_like(x[0]));
    for (int l = 0; l < k; ++l) {
      const Mat& J = spec.jmaps[l];
      T acc = zero_like(x[0]);
      for (int j = 0; j < m; ++j)
        if (J(i, j) != 0.0) acc = acc + J(i, j) * x[j];
      row[m + l] = acc;
    }
  }
  return frame;
}

}  // namespace carnot
