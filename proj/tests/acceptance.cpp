// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failures. Expects the polarcg binary path as argv[1] (used by the
// determinism criterion); run from the repository root so the golden files
// resolve.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "carnot/flow.hpp"
#include "carnot/rng.hpp"
#include "carnot/operators.hpp"
#include "carnot/quadrature.hpp"
#include "carnot/report.hpp"
#include "carnot/verify.hpp"

using namespace carnot;

namespace {

constexpr double kPi = 3.14159265358979323846;

int g_failures = 0;

void criterion(int id, const std::string& label, const std::function<std::string()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    detail = run();
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  if (detail.rfind("FAIL", 0) == 0) pass = false;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] criterion %d: %s (%.1f s) %s\n", pass ? "PASS" : "FAIL", id,
              label.c_str(), secs, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<Point> h1_sphere(const HomNorm& norm, int count, std::uint64_t seed) {
  const GroupSpec& spec = norm.group;
  rng::SplitMix sm(seed);
  std::vector<Point> out;
  while (static_cast<int>(out.size()) < count) {
    Vec c(3);
    for (int i = 0; i < 3; ++i) c[i] = 2.0 * sm.uniform() - 1.0;
    Point g(c);
    if (g.coords.head(2).norm() < 0.25) continue;
    const double nv = norm.value(g);
    if (nv < 1e-3) continue;
    out.push_back(dilate(spec, 1.0 / nv, g));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  // 1. Condition (i): scaled infinity-Laplacian residual of N.
  criterion(1, "condition (i), scaled L_inf(N) residuals", [&] {
    std::string detail;
    for (const char* name : {"heis1", "heis2", "quaternionic", "euclid3"}) {
      const GroupSpec& spec = builtin_group(name);
      HomNorm norm = natural_norm(spec);
      SamplingConfig cfg;
      cfg.points = 1000;
      const auto t0 = std::chrono::steady_clock::now();
      ResidualStats st = verify_condition_i(spec, norm, cfg);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const double tol = spec.kind == GroupKind::Euclidean ? 1e-10 : 1e-8;
      detail += fmt("%s=%.2e ", name, st.max_scaled);
      if (st.count < 1000) return std::string("FAIL: cloud too small on ") + name;
      if (st.max_scaled > tol)
        return fmt("FAIL: %s residual %.3e > %.0e", name, st.max_scaled, tol);
      if (secs > 10.0) return fmt("FAIL: %s took %.1f s > 10 s", name, secs);
    }
    return detail;
  });

  // 2. Condition (ii): L_p u_p residuals for the p-family.
  criterion(2, "condition (ii), L_p u_p residuals", [&] {
    std::string detail;
    for (const char* name : {"heis1", "heis2", "quaternionic", "euclid3"}) {
      const GroupSpec& spec = builtin_group(name);
      HomNorm norm = natural_norm(spec);
      SamplingConfig cfg;
      cfg.points = 1000;
      const auto t0 = std::chrono::steady_clock::now();
      double worst = 0.0, worst_p2 = 0.0;
      for (double p : default_p_list(spec)) {
        ResidualStats st = verify_condition_ii(spec, norm, p, cfg);
        if (p == 2.0)
          worst_p2 = st.max_scaled;
        else
          worst = std::max(worst, st.max_scaled);
      }
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      detail += fmt("%s=%.1e/%.1e ", name, worst, worst_p2);
      if (worst > 1e-7) return fmt("FAIL: %s residual %.3e > 1e-7", name, worst);
      if (worst_p2 > 1e-9) return fmt("FAIL: %s p=2 residual %.3e > 1e-9", name, worst_p2);
      if (secs > 30.0) return fmt("FAIL: %s took %.1f s > 30 s", name, secs);
    }
    return detail;
  });

  // 3. Condition (iii)/flow on Heisenberg curves.
  criterion(3, "condition (iii), flow axioms on heis1", [&] {
    const GroupSpec& h1 = builtin_group("heis1");
    HomNorm norm = natural_norm(h1);
    auto curves = h1_sphere(norm, 100, 0xC3);
    const std::vector<double> s_grid = {0.1, 0.25, 0.7, 1.0, 2.0, 5.0, 10.0};

    double sup_ode = 0.0, sup_radial = 0.0, sup_sine = 0.0, sup_speed = 0.0;
    for (const auto& a : curves) {
      double ref_speed = -1.0;
      for (double s : s_grid) {
        Point cf = heisenberg_flow_closed(h1, a, s);
        Point ode = integrate_flow(h1, norm, a, s);
        sup_ode = std::max(sup_ode, (ode.coords - cf.coords).cwiseAbs().maxCoeff());
        sup_radial = std::max(sup_radial, std::abs(norm.value(cf) - s));

        // Exact tangent by AD through the closed form.
        Vec y(4);
        y[0] = s;
        y.tail(3) = a.coords;
        std::span<const double> ys(y.data(), 4);
        auto seeds = jets::seed_jet1(ys);
        std::span<const jets::Jet1> sj(seeds.data(), seeds.size());
        auto gam = heisenberg_flow_closed_t<jets::Jet1>(1, sj.subspan(1), seeds[0]);
        Vec tang(3);
        for (int r = 0; r < 3; ++r) tang[r] = gam[static_cast<std::size_t>(r)].g[0];
        auto frame = frame_coefficients(h1, cf);
        HorizontalVector gn = hgrad(h1, norm.field, cf);
        Vec lift = gn.components[0] * frame[0] + gn.components[1] * frame[1];
        sup_sine = std::max(sup_sine, sine_angle(tang, lift));

        Mat fr(3, 2);
        fr.col(0) = frame[0];
        fr.col(1) = frame[1];
        Vec comps = (fr.transpose() * fr).ldlt().solve(fr.transpose() * tang);
        if (ref_speed < 0.0)
          ref_speed = comps.norm();
        else
          sup_speed = std::max(sup_speed, std::abs(comps.norm() - ref_speed));
      }
    }
    double sup_semi = 0.0;
    for (int i = 0; i < 16; ++i) {
      Point g = dilate(h1, 1.2, curves[static_cast<std::size_t>(i)]);
      Point two = integrate_flow(h1, norm, integrate_flow(h1, norm, g, 3.0), 2.0);
      Point six = integrate_flow(h1, norm, g, 6.0);
      sup_semi = std::max(sup_semi, (two.coords - six.coords).cwiseAbs().maxCoeff());
    }
    if (sup_ode > 1e-8) return fmt("FAIL: ode vs closed %.3e > 1e-8", sup_ode);
    if (sup_radial > 1e-9) return fmt("FAIL: N(gamma(s))-s %.3e > 1e-9", sup_radial);
    if (sup_sine > 1e-9) return fmt("FAIL: collinearity %.3e > 1e-9", sup_sine);
    if (sup_speed > 1e-9) return fmt("FAIL: speed constancy %.3e > 1e-9", sup_speed);
    if (sup_semi > 1e-8) return fmt("FAIL: semigroup %.3e > 1e-8", sup_semi);
    return fmt("ode=%.1e radial=%.1e sine=%.1e speed=%.1e semigroup=%.1e", sup_ode,
               sup_radial, sup_sine, sup_speed, sup_semi);
  });

  // 4. Proof identities.
  criterion(4, "proof identities (divergence, norm Laplacian, volume lemma)", [&] {
    std::string detail;
    for (const char* name : {"heis1", "heis2", "quaternionic", "euclid3"}) {
      const GroupSpec& spec = builtin_group(name);
      HomNorm norm = natural_norm(spec);
      SamplingConfig cfg;
      cfg.points = 300;
      ToleranceSet tols;
      auto lines = verify_condition_iii(spec, norm, cfg, tols);
      double eq1 = -1.0, eq2 = -1.0, vol = -1.0;
      for (const auto& l : lines) {
        if (l.name == "divergence_identity") eq1 = l.value;
        if (l.name == "norm_laplacian_identity") eq2 = l.value;
        if (l.name == "lemma_vol_chart") vol = l.value;
      }
      detail += fmt("%s:(%.0e,%.0e,%.0e) ", name, eq1, eq2, vol);
      if (eq2 > 1e-9) return fmt("FAIL: %s eq(2) residual %.3e > 1e-9", name, eq2);
      if (eq1 > 1e-7) return fmt("FAIL: %s eq(1) residual %.3e > 1e-7", name, eq1);
      if (vol > 1e-6) return fmt("FAIL: %s volume-lemma spread %.3e > 1e-6", name, vol);
    }
    return detail;
  });

  // 5. Integration formulas against the ambient oracles.
  criterion(5, "integration formula agreement on heis1", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    IntegrationJob job;
    job.spec = builtin_group("heis1");
    job.norm = natural_norm(job.spec);
    job.integrand = catalog_integrand(job.spec, job.norm, "exp_n4");
    suggested_truncation("exp_n4", job);
    suggested_box(job.spec, job.norm, "exp_n4", job.box_lo, job.box_hi);
    job.tol = 1e-8;

    job.method = IntegrationMethod::PolarHorizontal;
    const double ph = integrate(job).value;
    job.method = IntegrationMethod::AmbientTensor;
    const double at = integrate(job).value;
    job.method = IntegrationMethod::PolarDilation;
    const double pd = integrate(job).value;
    job.method = IntegrationMethod::PolarArclength;
    const double pa = integrate(job).value;

    IntegrationJob jn = job;
    jn.integrand = catalog_integrand(job.spec, job.norm, "nonradial_exp");
    suggested_truncation("nonradial_exp", jn);
    jn.method = IntegrationMethod::PolarHorizontal;
    jn.tol = 1e-7;
    const double nph = integrate(jn).value;
    jn.method = IntegrationMethod::AmbientMonteCarlo;
    jn.mc_samples = 10000000;
    jn.seed = 20240817;
    IntegrationResult mc = integrate(jn);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (std::abs(ph - at) > 1e-6 * std::abs(ph))
      return fmt("FAIL: polar vs tensor %.3e", std::abs(ph - at) / std::abs(ph));
    if (std::abs(ph - pd) > 1e-6 * std::abs(ph))
      return fmt("FAIL: polar vs dilation %.3e", std::abs(ph - pd) / std::abs(ph));
    if (std::abs(ph - pa) > 1e-6 * std::abs(ph))
      return fmt("FAIL: polar vs arclength %.3e", std::abs(ph - pa) / std::abs(ph));
    if (std::abs(nph - mc.value) > 3.0 * mc.error)
      return fmt("FAIL: nonradial polar %.6f vs MC %.6f +- %.6f", nph, mc.value,
                 mc.error);
    if (secs > 120.0) return fmt("FAIL: took %.0f s > 120 s", secs);
    return fmt("tensor=%.1e dilation=%.1e arclength=%.1e mc=%.1f sigma",
               std::abs(ph - at) / ph, std::abs(ph - pd) / ph,
               std::abs(ph - pa) / ph, std::abs(nph - mc.value) / mc.error);
  });

  // 6. Ring capacities.
  criterion(6, "ring capacities", [&] {
    const GroupSpec& e3 = builtin_group("euclid3");
    HomNorm n3 = natural_norm(e3);
    const double cap = ring_capacity(e3, n3, RingSpec{1.0, 2.0, 2.0}, 1e-9);
    const double newt = 8.0 * kPi;
    if (std::abs(cap - newt) > 1e-6 * newt)
      return fmt("FAIL: euclid3 cap %.9f vs 8pi %.9f", cap, newt);

    const GroupSpec& h1 = builtin_group("heis1");
    HomNorm n1 = natural_norm(h1);
    const double c1 = ring_capacity(h1, n1, RingSpec{1.0, 2.0, 3.0}, 1e-9);
    const double c2 = ring_capacity(h1, n1, RingSpec{2.0, 4.0, 3.0}, 1e-9);
    const double factor = std::pow(2.0, h1.hom_dimension - 3.0);
    if (std::abs(c2 - factor * c1) > 1e-8 * std::abs(factor * c1))
      return fmt("FAIL: scaling law rel err %.3e",
                 std::abs(c2 - factor * c1) / (factor * c1));

    const double p = static_cast<double>(h1.hom_dimension);
    const double q1 = ring_capacity(h1, n1, RingSpec{1.0, 2.0, p}, 1e-9);
    const double q2 = ring_capacity(h1, n1, RingSpec{3.0, 6.0, p}, 1e-9);
    if (std::abs(q1 - q2) > 1e-6 * std::abs(q1))
      return fmt("FAIL: conformal capacity %.3e", std::abs(q1 - q2) / q1);
    return fmt("newtonian=%.2e scaling=%.2e conformal=%.2e",
               std::abs(cap - newt) / newt,
               std::abs(c2 - factor * c1) / (factor * c1), std::abs(q1 - q2) / q1);
  });

  // 7. Kaplan constant derivation.
  criterion(7, "kaplan constant derivation", [&] {
    Mat j2(2, 2);
    j2 << 0, 2, -2, 0;
    KaplanDerivation d = derive_kaplan_constant(make_htype("heis1_as_htype", {j2}));
    if (std::abs(d.c - 1.0) > 1e-8)
      return fmt("FAIL: heisenberg-as-htype c=%.12f != 1", d.c);
    if (d.max_residual > 1e-8)
      return fmt("FAIL: residual %.3e > 1e-8", d.max_residual);
    const GroupSpec& quat = builtin_group("quaternionic");
    KaplanDerivation qa = derive_kaplan_constant(quat, 0xAAAA);
    KaplanDerivation qb = derive_kaplan_constant(quat, 0xBBBB);
    if (std::abs(qa.c - qb.c) > 1e-8)
      return fmt("FAIL: quaternionic constant unstable: %.12f vs %.12f", qa.c, qb.c);
    if (qa.max_residual > 1e-8)
      return fmt("FAIL: quaternionic residual %.3e", qa.max_residual);
    return fmt("heis c=%.10f quat c=%.10f (residuals %.1e, %.1e)", d.c, qa.c,
               d.max_residual, qa.max_residual);
  });

  // 8. Weak representation formula.
  criterion(8, "weak representation formula", [&] {
    const GroupSpec& e3 = builtin_group("euclid3");
    HomNorm n3 = natural_norm(e3);
    WeakCheckResult newt =
        weak_fundamental_check(e3, n3, 2.0, bump_field(e3, n3, 1.1), 1.1, 1e-8);
    if (std::abs(newt.ratio - 4.0 * kPi) > 1e-6 * 4.0 * kPi)
      return fmt("FAIL: newtonian ratio %.9f vs 4pi", newt.ratio);

    const GroupSpec& h1 = builtin_group("heis1");
    HomNorm n1 = natural_norm(h1);
    double r[3];
    const double radii[3] = {0.9, 1.6, 1.2};
    const double sharp[3] = {1.0, 1.0, 2.0};
    const bool mod[3] = {false, false, true};
    for (int i = 0; i < 3; ++i)
      r[i] = weak_fundamental_check(h1, n1, 2.0,
                                    bump_field(h1, n1, radii[i], sharp[i], mod[i]),
                                    radii[i], 1e-7)
                 .ratio;
    const double spread =
        (std::max({r[0], r[1], r[2]}) - std::min({r[0], r[1], r[2]})) /
        std::abs(r[0]);
    if (spread > 1e-4) return fmt("FAIL: heis1 ratio spread %.3e > 1e-4", spread);
    return fmt("newtonian=%.2e heis spread=%.2e kappa_2=%.6f",
               std::abs(newt.ratio - 4.0 * kPi) / (4.0 * kPi), spread, r[0]);
  });

  // 9. Determinism of the CLI report.
  criterion(9, "byte-identical reports for a fixed seed", [&] {
    if (cli.empty()) {
      // In-process fallback: render the same verification twice.
      const GroupSpec& h1 = builtin_group("heis1");
      HomNorm norm = natural_norm(h1);
      SamplingConfig cfg;
      cfg.points = 300;
      cfg.seed = 4242;
      std::string a = render_report(run_verification(h1, norm, {"i", "ii"}, cfg), {});
      std::string b = render_report(run_verification(h1, norm, {"i", "ii"}, cfg), {});
      if (a != b) return std::string("FAIL: in-process reports differ");
      return std::string("in-process reports identical (no CLI path given)");
    }
    const std::string out1 = "/tmp/polarcg_accept_1.report";
    const std::string out2 = "/tmp/polarcg_accept_2.report";
    const std::string cmd_base = "\"" + cli +
                                 "\" verify --group heis1 --conditions i,ii "
                                 "--points 300 --seed 4242 --out ";
    if (std::system((cmd_base + out1 + " 2>/dev/null").c_str()) != 0)
      return std::string("FAIL: first CLI run failed");
    if (std::system((cmd_base + out2 + " 2>/dev/null").c_str()) != 0)
      return std::string("FAIL: second CLI run failed");
    const std::string a = read_file(out1), b = read_file(out2);
    std::remove(out1.c_str());
    std::remove(out2.c_str());
    if (a.empty() || a != b) return std::string("FAIL: CLI reports differ");

    // Supplementary CLI contract: 8 flowlines emit 8 SVG paths.
    const std::string svg_path = "/tmp/polarcg_accept_flow.svg";
    const std::string flow_cmd = "\"" + cli +
                                 "\" flow --group heis1 --curves 8 --samples 60 "
                                 "--svg " + svg_path + " 2>/dev/null";
    if (std::system(flow_cmd.c_str()) != 0)
      return std::string("FAIL: flow CLI run failed");
    const std::string svg = read_file(svg_path);
    std::remove(svg_path.c_str());
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<path", pos)) != std::string::npos) {
      ++count;
      pos += 5;
    }
    if (count != 8) return fmt("FAIL: flow SVG has %zu paths, expected 8", count);
    return std::string("reports byte-identical; flow SVG has 8 paths");
  });

  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
