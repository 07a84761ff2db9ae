#pragma once

// Integration on the group: both polar-coordinate formulas (horizontal flow
// curves and dilation rays), direct ambient quadrature (tensor Gauss rules)
// and Monte Carlo as ground-truth oracles, plus the weak representation
// check for the singular p-solutions.

#include <cstdint>
#include <functional>

#include "carnot/chart.hpp"
#include "carnot/field.hpp"
#include "carnot/norms.hpp"

namespace carnot {

// ------------------------------------------------------------ 1-D building blocks

struct Quad1D {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
};

/// Adaptive Gauss-Kronrod 15(7) on [a, b].
Quad1D integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth = 32);

/// Gauss-Legendre nodes/weights on (-1, 1); cached per n.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

// ------------------------------------------------------------------ jobs

enum class IntegrationMethod {
  PolarHorizontal,   // int_S int f(gamma_a(s)) s^{Q-1} ds dsigma(a)
  PolarArclength,    // same measure through unit-speed curves and dsigma~
  PolarDilation,     // int_S int f(delta_s a) s^{Q-1} ds dsigma_dil(a)
  AmbientTensor,     // tensor Gauss over a box (oracle)
  AmbientMonteCarlo  // uniform box sampling (oracle)
};

std::string method_name(IntegrationMethod m);
IntegrationMethod method_from_name(const std::string& name);

struct IntegrationJob {
  GroupSpec spec;
  HomNorm norm;
  ScalarField integrand;

  IntegrationMethod method = IntegrationMethod::PolarHorizontal;
  double tol = 1e-7;  // relative convergence target (quadrature methods)

  // Radial truncation (in units of N). Integrands without compact support
  // must declare a bound on the truncated mass.
  double s_min = 1e-3;
  double s_max = 20.0;
  bool tail_declared = false;
  double tail_bound = 0.0;

  // Polar settings.
  double delta_pole = 1e-7;
  ChartVariant chart_variant = ChartVariant::Standard;
  double chart_rotation = 0.0;
  int chart_base_nodes = 16;
  int max_refinements = 5;

  // Ambient settings. Box must be set for ambient methods.
  Vec box_lo, box_hi;
  int tensor_base_nodes = 24;
  std::int64_t mc_samples = 10000000;
  std::uint64_t seed = 1;

  bool parallel = true;
};

struct ShellTally {
  double n_lo = 0.0, n_hi = 0.0;
  std::int64_t count = 0;
  double sum = 0.0;
};

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;  // refinement delta (quadrature) or standard error (MC)
  IntegrationMethod method = IntegrationMethod::PolarHorizontal;
  std::uint64_t seed = 0;
  std::int64_t evaluations = 0;
  std::vector<ShellTally> shells;  // MC: per-N-shell tallies
};

IntegrationResult integrate(const IntegrationJob& job);

/// Integral over the chart parameter box of node_fn(xi) with the tensor rule
/// (refined until two successive levels agree to rel_tol). Lower-level entry
/// used by the verification harness (e.g. ring capacities).
Quad1D chart_functional(const SphereChart& chart,
                        const std::function<double(const Vec&)>& node_fn,
                        double rel_tol = 1e-8, int base_nodes = 16,
                        int max_refinements = 5, bool parallel = true);

// -------------------------------------------------------- named integrands

/// Catalog: exp_n4, nonradial_exp, indicator_unit_ball, indicator_shell_1_2,
/// gaussian_sq (Euclidean only), hgrad_norm_pow2.
ScalarField catalog_integrand(const GroupSpec& spec, const HomNorm& norm,
                              const std::string& name);
std::vector<std::string> catalog_integrand_names();

/// Ambient box containing the (numerical) support of a catalog integrand.
void suggested_box(const GroupSpec& spec, const HomNorm& norm,
                   const std::string& name, Vec& lo, Vec& hi);

/// Fills truncation + tail declaration appropriate for a catalog integrand.
void suggested_truncation(const std::string& name, IntegrationJob& job);

// ----------------------------------------------------------- test functions

/// Smooth compactly supported bump: chi(N^4 / R^4) with chi(u) =
/// exp(k (1 - 1/(1-u))) on [0,1); value 1 at the identity. The modulated
/// variant multiplies by (1 + 0.3 x_1 / (1 + N^4)).
ScalarField bump_field(const GroupSpec& spec, const HomNorm& norm, double radius,
                       double sharpness = 1.0, bool modulated = false);

struct WeakCheckResult {
  double integral = 0.0;
  double phi_at_e = 0.0;
  double ratio = 0.0;  // integral / phi(e); the p-dependent constant
  double error = 0.0;
};

/// Evaluates int ||∇_0 u_p||^{p-2} <∇_0 u_p, ∇_0 phi> dmu by horizontal polar
/// quadrature (the integrand is radial-weighted, so the singularity at the
/// identity is integrable). `support_radius` truncates the radial integral.
WeakCheckResult weak_fundamental_check(const GroupSpec& spec, const HomNorm& norm,
                                       double p, const ScalarField& phi,
                                       double support_radius, double tol = 1e-8,
                                       bool parallel = true);

}  // namespace carnot
