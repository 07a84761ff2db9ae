#include "carnot/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <queue>

#include "carnot/operators.hpp"
#include "carnot/parallel.hpp"
#include "carnot/rng.hpp"

namespace carnot {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 15-point Kronrod / 7-point Gauss pair (positive abscissae).
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759,
                            0.864864423359769, 0.741531185599394,
                            0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979,
                            0.104790010322250, 0.140653259715525,
                            0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct GkInterval {
  double a, b, value, error;
  bool operator<(const GkInterval& o) const { return error < o.error; }
};

GkInterval gk15(const std::function<double(double)>& f, double a, double b,
                std::int64_t& evals) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  const double fc = f(c);
  resk += kWgk[7] * fc;
  resg += kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kXgk[i];
    const double f1 = f(c - x), f2 = f(c + x);
    resk += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) resg += kWg[i / 2] * (f1 + f2);
  }
  evals += 15;
  GkInterval out;
  out.a = a;
  out.b = b;
  out.value = resk * h;
  out.error = std::abs((resk - resg) * h);
  return out;
}

}  // namespace

Quad1D integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
  Quad1D out;
  if (a == b) return out;
  std::priority_queue<GkInterval> queue;
  queue.push(gk15(f, a, b, out.evaluations));
  double total = queue.top().value, err = queue.top().error;
  const std::int64_t max_intervals = std::int64_t(1) << std::min(max_depth, 22);
  std::int64_t n = 1;
  while (err > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals) {
    GkInterval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    GkInterval left = gk15(f, worst.a, mid, out.evaluations);
    GkInterval right = gk15(f, mid, worst.b, out.evaluations);
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++n;
  }
  if (err > std::max(abs_tol, rel_tol * std::abs(total)) * 100.0)
    throw ToleranceNotMet("integrate_gk: interval budget exhausted");
  out.value = total;
  out.error = err;
  return out;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // P_n and P'_n by the three-term recurrence.
  auto legendre = [n](double xi, double& pn, double& dpn) {
    double p1 = 1.0, p2 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p3 = p2;
      p2 = p1;
      p1 = ((2.0 * j + 1.0) * xi * p2 - j * p3) / (j + 1.0);
    }
    pn = p1;
    dpn = n * (xi * p1 - p2) / (xi * xi - 1.0);
  };

  std::vector<double> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pn = 0.0, dpn = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(xi, pn, dpn);
      const double dx = pn / dpn;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    legendre(xi, pn, dpn);
    x[static_cast<std::size_t>(i)] = -xi;
    x[static_cast<std::size_t>(n - 1 - i)] = xi;
    w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] =
        2.0 / ((1.0 - xi * xi) * dpn * dpn);
  }
  auto [pos, ok] = cache.emplace(n, std::make_pair(std::move(x), std::move(w)));
  (void)ok;
  return pos->second;
}

namespace {

// Per-dimension rule on the chart/box: Gauss-Legendre for ordinary
// dimensions, equal-weight midpoint rule for periodic ones (spectrally
// accurate there and exact for pure harmonics).
struct TensorRule {
  std::vector<std::vector<double>> nodes, weights;

  std::int64_t total() const {
    std::int64_t t = 1;
    for (auto& n : nodes) t *= static_cast<std::int64_t>(n.size());
    return t;
  }
  void at(std::int64_t flat, Vec& xi, double& w) const {
    w = 1.0;
    for (std::size_t d = 0; d < nodes.size(); ++d) {
      const auto sz = static_cast<std::int64_t>(nodes[d].size());
      const auto idx = static_cast<std::size_t>(flat % sz);
      flat /= sz;
      xi[static_cast<long>(d)] = nodes[d][idx];
      w *= weights[d][idx];
    }
  }
};

TensorRule make_rule(const Vec& lo, const Vec& hi, const std::vector<bool>& periodic,
                     const std::vector<int>& counts) {
  TensorRule rule;
  const int dims = static_cast<int>(lo.size());
  rule.nodes.resize(dims);
  rule.weights.resize(dims);
  for (int d = 0; d < dims; ++d) {
    const int n = counts[static_cast<std::size_t>(d)];
    auto& nd = rule.nodes[static_cast<std::size_t>(d)];
    auto& wd = rule.weights[static_cast<std::size_t>(d)];
    nd.resize(static_cast<std::size_t>(n));
    wd.resize(static_cast<std::size_t>(n));
    const double a = lo[d], b = hi[d];
    if (periodic[static_cast<std::size_t>(d)]) {
      const double h = (b - a) / n;
      for (int i = 0; i < n; ++i) {
        nd[static_cast<std::size_t>(i)] = a + (i + 0.5) * h;
        wd[static_cast<std::size_t>(i)] = h;
      }
    } else {
      const auto& [gx, gw] = gauss_legendre(n);
      for (int i = 0; i < n; ++i) {
        nd[static_cast<std::size_t>(i)] = 0.5 * (a + b) + 0.5 * (b - a) * gx[static_cast<std::size_t>(i)];
        wd[static_cast<std::size_t>(i)] = 0.5 * (b - a) * gw[static_cast<std::size_t>(i)];
      }
    }
  }
  return rule;
}

struct TensorOutcome {
  double value = 0.0;
  double error = 0.0;
  std::int64_t evaluations = 0;
};

TensorOutcome tensor_integrate(const Vec& lo, const Vec& hi,
                               const std::vector<bool>& periodic, int base_nodes,
                               int max_refinements, double tol, bool parallel,
                               const std::function<double(const Vec&)>& node_fn) {
  const int dims = static_cast<int>(lo.size());
  TensorOutcome out;
  double prev = 0.0;
  bool have_prev = false;
  int n = base_nodes;
  std::atomic<std::int64_t> evals{0};
  for (int level = 0; level <= max_refinements; ++level) {
    std::vector<int> counts(static_cast<std::size_t>(dims), n);
    TensorRule rule = make_rule(lo, hi, periodic, counts);
    const std::int64_t total = rule.total();
    const double value = par::sum_indexed(total, parallel, [&](std::int64_t i) {
      Vec xi(dims);
      double w;
      rule.at(i, xi, w);
      evals.fetch_add(1, std::memory_order_relaxed);
      return w * node_fn(xi);
    });
    if (have_prev) {
      const double delta = std::abs(value - prev);
      if (delta <= tol * std::max(std::abs(value), 1e-10)) {
        out.value = value;
        out.error = delta;
        out.evaluations = evals.load();
        return out;
      }
    }
    prev = value;
    have_prev = true;
    n = static_cast<int>(std::ceil(n * 1.6));
  }
  throw ToleranceNotMet("tensor_integrate: refinement budget exhausted without convergence");
}

// Nested polar integration. The tensor rule over the chart is split into the
// non-periodic dimensions (outer) and the periodic angular ones (inner); the
// inner equal-weight sum runs at each fixed radius INSIDE the radial
// quadrature. At a fixed radius the periodic rule integrates the rotational
// phase of the flow exactly, so the radial integrand stays smooth even where
// the phase frequency blows up near the chart poles.
struct PolarNodeSet {
  std::vector<Vec> xi;        // full chart parameters
  std::vector<double> w;      // inner weights
  std::vector<double> rho;    // measure density at xi
  std::vector<Point> start;   // a(xi)
};

TensorOutcome polar_nested_integrate(
    const SphereChart& chart, int base_nodes, int max_refinements, double tol,
    bool parallel, const std::function<double(const Vec&)>& density_fn,
    const std::function<double(const PolarNodeSet&, std::size_t, double)>& point_fn,
    double t_lo, double t_hi) {
  const int dims = chart.dims();
  std::vector<int> outer_dims, inner_dims;
  for (int d = 0; d < dims; ++d)
    (chart.periodic[static_cast<std::size_t>(d)] ? inner_dims : outer_dims)
        .push_back(d);

  TensorOutcome out;
  double prev = 0.0;
  bool have_prev = false;
  int n = base_nodes;
  std::atomic<std::int64_t> evals{0};

  for (int level = 0; level <= max_refinements; ++level) {
    // Per-dimension 1-D rules at this level.
    std::vector<std::vector<double>> nodes(static_cast<std::size_t>(dims)),
        weights(static_cast<std::size_t>(dims));
    for (int d = 0; d < dims; ++d) {
      auto& nd = nodes[static_cast<std::size_t>(d)];
      auto& wd = weights[static_cast<std::size_t>(d)];
      const double a = chart.lo[d], b = chart.hi[d];
      nd.resize(static_cast<std::size_t>(n));
      wd.resize(static_cast<std::size_t>(n));
      if (chart.periodic[static_cast<std::size_t>(d)]) {
        const double h = (b - a) / n;
        for (int i = 0; i < n; ++i) {
          nd[static_cast<std::size_t>(i)] = a + (i + 0.5) * h;
          wd[static_cast<std::size_t>(i)] = h;
        }
      } else {
        const auto& [gx, gw] = gauss_legendre(n);
        for (int i = 0; i < n; ++i) {
          nd[static_cast<std::size_t>(i)] = 0.5 * (a + b) + 0.5 * (b - a) * gx[static_cast<std::size_t>(i)];
          wd[static_cast<std::size_t>(i)] = 0.5 * (b - a) * gw[static_cast<std::size_t>(i)];
        }
      }
    }

    std::int64_t outer_total = 1, inner_total = 1;
    for (std::size_t d = 0; d < outer_dims.size(); ++d) outer_total *= n;
    for (std::size_t d = 0; d < inner_dims.size(); ++d) inner_total *= n;

    const double value = par::sum_indexed(outer_total, parallel, [&](std::int64_t oi) {
      // Decode the outer node.
      Vec xi(dims);
      double wo = 1.0;
      std::int64_t rem = oi;
      for (int d : outer_dims) {
        const auto idx = static_cast<std::size_t>(rem % n);
        rem /= n;
        xi[d] = nodes[static_cast<std::size_t>(d)][idx];
        wo *= weights[static_cast<std::size_t>(d)][idx];
      }
      // Materialize the inner (periodic) node set at this outer node.
      PolarNodeSet set;
      set.xi.reserve(static_cast<std::size_t>(inner_total));
      for (std::int64_t ii = 0; ii < inner_total; ++ii) {
        Vec full = xi;
        double wi = 1.0;
        std::int64_t r2 = ii;
        for (int d : inner_dims) {
          const auto idx = static_cast<std::size_t>(r2 % n);
          r2 /= n;
          full[d] = nodes[static_cast<std::size_t>(d)][idx];
          wi *= weights[static_cast<std::size_t>(d)][idx];
        }
        set.xi.push_back(full);
        set.w.push_back(wi);
        set.rho.push_back(density_fn(full));
        set.start.push_back(chart.map(full));
      }
      auto radial = [&](double t) {
        double acc = 0.0;
        for (std::size_t i = 0; i < set.xi.size(); ++i)
          acc += set.w[i] * set.rho[i] * point_fn(set, i, t);
        evals.fetch_add(static_cast<std::int64_t>(set.xi.size()),
                        std::memory_order_relaxed);
        return acc;
      };
      Quad1D r = integrate_gk(radial, t_lo, t_hi, 1e-14, std::max(tol * 0.1, 1e-12));
      return wo * r.value;
    });

    if (have_prev) {
      const double delta = std::abs(value - prev);
      if (delta <= tol * std::max(std::abs(value), 1e-10)) {
        out.value = value;
        out.error = delta;
        out.evaluations = evals.load();
        return out;
      }
    }
    prev = value;
    have_prev = true;
    n = static_cast<int>(std::ceil(n * 1.6));
  }
  throw ToleranceNotMet("polar integration: refinement budget exhausted");
}

IntegrationResult integrate_polar(const IntegrationJob& job) {
  SphereChart chart = make_sphere_chart(job.spec, job.norm, job.delta_pole,
                                        job.chart_variant, job.chart_rotation);
  const GroupSpec& spec = job.spec;
  const int q = spec.hom_dimension;

  std::function<double(const Vec&)> density_fn;
  if (job.method == IntegrationMethod::PolarDilation)
    density_fn = [&](const Vec& xi) { return dilation_density(chart, xi, 1.0); };
  else
    density_fn = [&](const Vec& xi) { return sigma_density(chart, xi, 1.0); };

  std::function<double(const PolarNodeSet&, std::size_t, double)> point_fn;
  switch (job.method) {
    case IntegrationMethod::PolarHorizontal:
      point_fn = [&](const PolarNodeSet& set, std::size_t i, double t) {
        Point g = polar_curve(spec, job.norm, set.start[i], t);
        return job.integrand.value(g.coords) * std::pow(t, q - 1);
      };
      break;
    case IntegrationMethod::PolarArclength:
      // beta_a(s) sampled at its own parameter s = t / lambda_a and weighted
      // by lambda_a^Q; the independent curve code path is exercised per node.
      point_fn = [&](const PolarNodeSet& set, std::size_t i, double t) {
        const double lambda = hgrad(spec, job.norm.field, set.start[i]).norm();
        Point g = arclength_curve(spec, job.norm, set.start[i], t / lambda);
        return std::pow(lambda, q) * job.integrand.value(g.coords) *
               std::pow(t / lambda, q - 1) / lambda;
      };
      break;
    case IntegrationMethod::PolarDilation:
      point_fn = [&](const PolarNodeSet& set, std::size_t i, double t) {
        Point g = dilate(spec, t, set.start[i]);
        return job.integrand.value(g.coords) * std::pow(t, q - 1);
      };
      break;
    default:
      throw Error("integrate_polar: not a polar method");
  }

  TensorOutcome t =
      polar_nested_integrate(chart, job.chart_base_nodes, job.max_refinements,
                             job.tol, job.parallel, density_fn, point_fn,
                             job.s_min, job.s_max);
  IntegrationResult res;
  res.value = t.value;
  res.error = t.error + job.tail_bound;
  res.method = job.method;
  res.evaluations = t.evaluations;
  return res;
}

IntegrationResult integrate_tensor(const IntegrationJob& job) {
  if (job.box_lo.size() == 0 || job.box_lo.size() != job.box_hi.size())
    throw InvalidArgument("ambient integration requires a box");
  std::vector<bool> periodic(static_cast<std::size_t>(job.box_lo.size()), false);
  auto node_fn = [&](const Vec& x) { return job.integrand.value(x); };
  TensorOutcome t = tensor_integrate(job.box_lo, job.box_hi, periodic,
                                     job.tensor_base_nodes, job.max_refinements,
                                     job.tol, job.parallel, node_fn);
  IntegrationResult res;
  res.value = t.value;
  res.error = t.error + job.tail_bound;
  res.method = job.method;
  res.evaluations = t.evaluations;
  return res;
}

constexpr double kShellEdges[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0};
constexpr int kNumShells = 7;  // last shell is [5, inf)

IntegrationResult integrate_mc(const IntegrationJob& job) {
  if (job.box_lo.size() == 0 || job.box_lo.size() != job.box_hi.size())
    throw InvalidArgument("ambient integration requires a box");
  const int dims = static_cast<int>(job.box_lo.size());
  double volume = 1.0;
  for (int d = 0; d < dims; ++d) volume *= job.box_hi[d] - job.box_lo[d];
  rng::CounterRng rg(job.seed);

  // Components: sum f, sum f^2, then per shell (count, sum f).
  constexpr int kComponents = 2 + 2 * kNumShells;
  auto sums = par::sum_indexed_multi<kComponents>(
      job.mc_samples, job.parallel, [&](std::int64_t i, double* out) {
        Vec x(dims);
        for (int d = 0; d < dims; ++d)
          x[d] = rg.uniform(static_cast<std::uint64_t>(i),
                            static_cast<std::uint64_t>(d), job.box_lo[d],
                            job.box_hi[d]);
        const double fx = job.integrand.value(x);
        for (int c = 0; c < kComponents; ++c) out[c] = 0.0;
        out[0] = fx;
        out[1] = fx * fx;
        const double nv = job.norm.value(Point(x));
        int shell = kNumShells - 1;
        for (int sI = 0; sI + 1 < kNumShells; ++sI)
          if (nv >= kShellEdges[sI] && nv < kShellEdges[sI + 1]) {
            shell = sI;
            break;
          }
        out[2 + 2 * shell] = 1.0;
        out[3 + 2 * shell] = fx;
      });

  const double mean = sums[0] / static_cast<double>(job.mc_samples);
  const double var =
      std::max(0.0, (sums[1] - sums[0] * mean) / static_cast<double>(job.mc_samples - 1));
  IntegrationResult res;
  res.value = volume * mean;
  res.error = volume * std::sqrt(var / static_cast<double>(job.mc_samples));
  res.method = job.method;
  res.seed = job.seed;
  res.evaluations = job.mc_samples;
  for (int sI = 0; sI < kNumShells; ++sI) {
    ShellTally t;
    t.n_lo = kShellEdges[sI];
    t.n_hi = sI + 1 < kNumShells ? kShellEdges[sI + 1]
                                 : std::numeric_limits<double>::infinity();
    t.count = static_cast<std::int64_t>(sums[static_cast<std::size_t>(2 + 2 * sI)]);
    t.sum = sums[static_cast<std::size_t>(3 + 2 * sI)];
    res.shells.push_back(t);
  }
  return res;
}

}  // namespace

Quad1D chart_functional(const SphereChart& chart,
                        const std::function<double(const Vec&)>& node_fn,
                        double rel_tol, int base_nodes, int max_refinements,
                        bool parallel) {
  TensorOutcome t = tensor_integrate(chart.lo, chart.hi, chart.periodic,
                                     base_nodes, max_refinements, rel_tol,
                                     parallel, node_fn);
  Quad1D out;
  out.value = t.value;
  out.error = t.error;
  out.evaluations = t.evaluations;
  return out;
}

std::string method_name(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::PolarHorizontal: return "polar";
    case IntegrationMethod::PolarArclength: return "polar_arclength";
    case IntegrationMethod::PolarDilation: return "dilation";
    case IntegrationMethod::AmbientTensor: return "tensor";
    case IntegrationMethod::AmbientMonteCarlo: return "mc";
  }
  return "unknown";
}

IntegrationMethod method_from_name(const std::string& name) {
  if (name == "polar") return IntegrationMethod::PolarHorizontal;
  if (name == "polar_arclength") return IntegrationMethod::PolarArclength;
  if (name == "dilation") return IntegrationMethod::PolarDilation;
  if (name == "tensor") return IntegrationMethod::AmbientTensor;
  if (name == "mc") return IntegrationMethod::AmbientMonteCarlo;
  throw InvalidArgument("unknown integration method '" + name + "'");
}

IntegrationResult integrate(const IntegrationJob& job) {
  if (!job.integrand.valid()) throw InvalidArgument("integrate: no integrand");
  switch (job.method) {
    case IntegrationMethod::PolarHorizontal:
    case IntegrationMethod::PolarArclength:
    case IntegrationMethod::PolarDilation:
      if (!job.tail_declared)
        throw InvalidArgument(
            "integrate: declare a radial truncation tail bound for the integrand");
      return integrate_polar(job);
    case IntegrationMethod::AmbientTensor:
      return integrate_tensor(job);
    case IntegrationMethod::AmbientMonteCarlo:
      return integrate_mc(job);
  }
  throw Error("integrate: unhandled method");
}

// ------------------------------------------------------------ integrands

ScalarField catalog_integrand(const GroupSpec& spec, const HomNorm& norm,
                              const std::string& name) {
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  const double c = norm.c;
  using detail::norm_quartic_eval;
  if (name == "exp_n4") {
    return ScalarField::make("exp_n4", [m, k, c](auto x) {
      return jm::exp(-norm_quartic_eval(m, k, c, x));
    });
  }
  if (name == "nonradial_exp") {
    return ScalarField::make("nonradial_exp", [m, k, c](auto x) {
      auto q = norm_quartic_eval(m, k, c, x);
      auto n = jm::pow(q, 0.25);
      return jm::exp(-q) * (1.0 + x[0] / (1.0 + n));
    });
  }
  if (name == "indicator_unit_ball") {
    return ScalarField::make("indicator_unit_ball", [m, k, c](auto x) {
      auto q = norm_quartic_eval(m, k, c, x);
      using jets::one_like;
      using jets::zero_like;
      return jm::scalar_value(q) <= 1.0 ? one_like(x[0]) : zero_like(x[0]);
    });
  }
  if (name == "indicator_shell_1_2") {
    return ScalarField::make("indicator_shell_1_2", [m, k, c](auto x) {
      auto q = norm_quartic_eval(m, k, c, x);
      const double v = jm::scalar_value(q);
      using jets::one_like;
      using jets::zero_like;
      return (v >= 1.0 && v <= 16.0) ? one_like(x[0]) : zero_like(x[0]);
    });
  }
  if (name == "gaussian_sq") {
    if (spec.kind != GroupKind::Euclidean)
      throw InvalidArgument("gaussian_sq: Euclidean groups only");
    return ScalarField::make("gaussian_sq", [](auto x) {
      auto s = x[0] * x[0];
      for (std::size_t i = 1; i < x.size(); ++i) s = s + x[i] * x[i];
      return jm::exp(-s);
    });
  }
  if (name == "hgrad_norm_pow2") {
    // ||∇_0 N||^2 damped by exp(-N^4); extension hook for surface integrals
    // of gradient powers (radially weighted so it is integrable).
    ScalarField nf = norm.field;
    GroupSpec sp = spec;
    ScalarField::Slots slots;
    slots.value = [sp, nf, m, k, c](std::span<const double> x) {
      Vec xv = Eigen::Map<const Vec>(x.data(), static_cast<long>(x.size()));
      const double gn2 = detail::gradsq_eval<double>(sp, nf, x);
      const double q = norm_quartic_eval(m, k, c, x);
      return gn2 * std::exp(-q);
    };
    return ScalarField::from_slots("hgrad_norm_pow2", std::move(slots));
  }
  throw InvalidArgument("unknown integrand '" + name + "'");
}

std::vector<std::string> catalog_integrand_names() {
  return {"exp_n4",           "nonradial_exp",       "indicator_unit_ball",
          "indicator_shell_1_2", "gaussian_sq",      "hgrad_norm_pow2"};
}

void suggested_box(const GroupSpec& spec, const HomNorm& norm,
                   const std::string& name, Vec& lo, Vec& hi) {
  const int n = spec.dim(), m = spec.m();
  double r = 3.2;  // exp(-N^4) dies out well before N = 3.2
  if (name == "indicator_unit_ball") r = 1.0;
  if (name == "indicator_shell_1_2") r = 2.0;
  if (name == "gaussian_sq") r = 6.0;
  lo.resize(n);
  hi.resize(n);
  for (int i = 0; i < n; ++i) {
    double e = r;
    if (spec.is_step_two() && i >= m) e = r * r / std::sqrt(norm.c);
    lo[i] = -e;
    hi[i] = e;
  }
}

void suggested_truncation(const std::string& name, IntegrationJob& job) {
  if (name == "indicator_unit_ball") {
    job.s_min = 1e-6;
    job.s_max = 1.0;
    job.tail_declared = true;
    job.tail_bound = 0.0;
  } else if (name == "indicator_shell_1_2") {
    job.s_min = 1.0;
    job.s_max = 2.0;
    job.tail_declared = true;
    job.tail_bound = 0.0;
  } else if (name == "exp_n4" || name == "nonradial_exp" ||
             name == "hgrad_norm_pow2") {
    job.s_min = 1e-4;
    job.s_max = 4.0;  // tail of exp(-s^4) s^{Q-1} beyond 4 is below 1e-100
    job.tail_declared = true;
    job.tail_bound = 1e-30;
  } else if (name == "gaussian_sq") {
    job.s_min = 1e-4;
    job.s_max = 7.0;
    job.tail_declared = true;
    job.tail_bound = 1e-18;
  }
}

ScalarField bump_field(const GroupSpec& spec, const HomNorm& norm, double radius,
                       double sharpness, bool modulated) {
  const int m = spec.m(), k = spec.is_step_two() ? spec.k() : 0;
  const double c = norm.c;
  const double r4 = radius * radius * radius * radius;
  using detail::norm_quartic_eval;
  return ScalarField::make(
      "bump_r" + std::to_string(radius),
      [m, k, c, r4, sharpness, modulated](auto x) {
        auto q = norm_quartic_eval(m, k, c, x);
        using jets::one_like;
        using jets::zero_like;
        if (jm::scalar_value(q) >= r4 * (1.0 - 1e-14)) return zero_like(x[0]);
        auto u = q * (1.0 / r4);
        auto body = jm::exp(sharpness * (1.0 - 1.0 / (1.0 - u)));
        if (!modulated) return body;
        return body * (1.0 + 0.3 * (x[0] / (1.0 + q)));
      });
}

WeakCheckResult weak_fundamental_check(const GroupSpec& spec, const HomNorm& norm,
                                       double p, const ScalarField& phi,
                                       double support_radius, double tol,
                                       bool parallel) {
  SingularSolution up = u_p_solution(norm, p);
  SphereChart chart = make_sphere_chart(spec, norm);
  const int q = spec.hom_dimension;
  const double s_min = 1e-6;  // integrand is O(t^{Q-1})-weighted, tail O(s_min)

  auto density_fn = [&](const Vec& xi) { return sigma_density(chart, xi, 1.0); };
  auto point_fn = [&](const PolarNodeSet& set, std::size_t i, double t) {
    Point g = polar_curve(spec, norm, set.start[i], t);
    HorizontalVector gu = hgrad(spec, up.field, g);
    HorizontalVector gp = hgrad(spec, phi, g);
    const double gn2 = gu.squaredNorm();
    const double w = p == 2.0 ? 1.0 : std::pow(gn2, 0.5 * (p - 2.0));
    return w * gu.dot(gp) * std::pow(t, q - 1);
  };
  TensorOutcome t = polar_nested_integrate(chart, 16, 5, tol, parallel, density_fn,
                                           point_fn, s_min, support_radius);
  WeakCheckResult res;
  res.integral = t.value;
  res.phi_at_e = phi.value(identity(spec).coords);
  if (res.phi_at_e == 0.0) throw InvalidArgument("weak check: phi(e) must be nonzero");
  res.ratio = res.integral / res.phi_at_e;
  res.error = t.error;
  return res;
}

}  // namespace carnot
