// Benchmark of the OpenMP kernels against the serial reference. The two
// drivers share one block decomposition and reduction order, so their
// results must match bitwise; this prints timings and verifies that.

#include <chrono>
#include <cstdio>

#include "carnot/flow.hpp"
#include "carnot/operators.hpp"
#include "carnot/parallel.hpp"
#include "carnot/quadrature.hpp"
#include "carnot/verify.hpp"

using namespace carnot;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Row {
  const char* name;
  double serial_ms, parallel_ms;
  bool identical;
};

template <class F>
Row run(const char* name, F&& fn) {
  const double t0 = now_ms();
  const double serial = fn(false);
  const double t1 = now_ms();
  const double par = fn(true);
  const double t2 = now_ms();
  Row r;
  r.name = name;
  r.serial_ms = t1 - t0;
  r.parallel_ms = t2 - t1;
  r.identical = serial == par;
  return r;
}

}  // namespace

int main() {
  std::vector<Row> rows;

  {
    const GroupSpec& spec = builtin_group("heis2");
    HomNorm norm = natural_norm(spec);
    rows.push_back(run("condition_i residual cloud (heis2, 2000 pts)", [&](bool par) {
      SamplingConfig cfg;
      cfg.points = 2000;
      cfg.parallel = par;
      return verify_condition_i(spec, norm, cfg).max_scaled;
    }));
  }

  {
    const GroupSpec& spec = builtin_group("heis1");
    HomNorm norm = natural_norm(spec);
    rows.push_back(run("monte carlo mu(N<1) (heis1, 4e6 samples)", [&](bool par) {
      IntegrationJob job;
      job.spec = spec;
      job.norm = norm;
      job.integrand = catalog_integrand(spec, norm, "indicator_unit_ball");
      job.method = IntegrationMethod::AmbientMonteCarlo;
      job.mc_samples = 4000000;
      job.seed = 99;
      job.parallel = par;
      suggested_box(spec, norm, "indicator_unit_ball", job.box_lo, job.box_hi);
      return integrate(job).value;
    }));
    rows.push_back(run("polar quadrature exp(-N^4) (heis1)", [&](bool par) {
      IntegrationJob job;
      job.spec = spec;
      job.norm = norm;
      job.integrand = catalog_integrand(spec, norm, "exp_n4");
      job.method = IntegrationMethod::PolarHorizontal;
      job.tol = 1e-8;
      job.parallel = par;
      suggested_truncation("exp_n4", job);
      return integrate(job).value;
    }));
    rows.push_back(run("ring capacity cap_2(1,2) (heis1)", [&](bool par) {
      return ring_capacity(spec, norm, RingSpec{1.0, 2.0, 2.0}, 1e-8, par);
    }));
  }

  std::printf("%-48s %12s %12s %9s %s\n", "kernel", "serial ms", "openmp ms",
              "speedup", "bitwise");
  for (const auto& r : rows)
    std::printf("%-48s %12.1f %12.1f %8.2fx %s\n", r.name, r.serial_ms,
                r.parallel_ms, r.serial_ms / r.parallel_ms,
                r.identical ? "ok" : "MISMATCH");
  std::printf("openmp: %s, max threads %d\n",
              par::openmp_enabled() ? "enabled" : "disabled", par::max_threads());

  for (const auto& r : rows)
    if (!r.identical) return 1;
  return 0;
}
