#include <doctest.h>

#include <cmath>

#include "carnot/report.hpp"
#include "carnot/verify.hpp"

using namespace carnot;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("verify") {

TEST_CASE("condition (i) residuals across the catalog") {
  SamplingConfig cfg;
  cfg.points = 600;
  for (const char* name : {"heis1", "heis2", "quaternionic"}) {
    const GroupSpec& spec = builtin_group(name);
    HomNorm norm = natural_norm(spec);
    ResidualStats st = verify_condition_i(spec, norm, cfg);
    CHECK(st.count == 600);
    CHECK(st.max_scaled <= 1e-8);
  }
  const GroupSpec& e3 = builtin_group("euclid3");
  ResidualStats st = verify_condition_i(e3, natural_norm(e3), cfg);
  CHECK(st.max_scaled <= 1e-10);
}

TEST_CASE("condition (ii) residuals for the p-family") {
  SamplingConfig cfg;
  cfg.points = 250;
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm norm = natural_norm(h1);
  for (double p : default_p_list(h1)) {
    ResidualStats st = verify_condition_ii(h1, norm, p, cfg);
    CHECK(st.max_scaled <= (p == 2.0 ? 1e-9 : 1e-7));
  }
  // p = infinity delegates to condition (i).
  ResidualStats inf_st = verify_condition_ii(
      h1, norm, std::numeric_limits<double>::infinity(), cfg);
  ResidualStats i_st = verify_condition_i(h1, norm, cfg);
  CHECK(inf_st.max_scaled == i_st.max_scaled);
}

TEST_CASE("condition (iii) bundle on heis1 and euclid3") {
  SamplingConfig cfg;
  cfg.points = 250;
  ToleranceSet tols;
  for (const char* name : {"heis1", "euclid3"}) {
    const GroupSpec& spec = builtin_group(name);
    HomNorm norm = natural_norm(spec);
    auto lines = verify_condition_iii(spec, norm, cfg, tols);
    for (const auto& l : lines) {
      INFO(spec.name, ": ", l.name, " value=", l.value, " tol=", l.tolerance);
      CHECK((l.skipped || l.pass));
    }
  }
}

TEST_CASE("full report determinism and serial/parallel equality") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm norm = natural_norm(h1);
  SamplingConfig cfg;
  cfg.points = 200;
  cfg.seed = 987654321;

  VerificationReport r1 = run_verification(h1, norm, {"i", "ii"}, cfg);
  VerificationReport r2 = run_verification(h1, norm, {"i", "ii"}, cfg);
  CHECK(render_report(r1, {}) == render_report(r2, {}));

  SamplingConfig serial_cfg = cfg;
  serial_cfg.parallel = false;
  VerificationReport r3 = run_verification(h1, norm, {"i", "ii"}, serial_cfg);
  CHECK(render_report(r1, {}) == render_report(r3, {}));

  // A different seed must actually change the sampled statistics.
  SamplingConfig other = cfg;
  other.seed = 1234;
  VerificationReport r4 = run_verification(h1, norm, {"i"}, other);
  CHECK(render_report(r1, {}) != render_report(r4, {}));
}

TEST_CASE("verdicts respect tolerance overrides") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm norm = natural_norm(h1);
  SamplingConfig cfg;
  cfg.points = 120;
  ToleranceSet impossible;
  impossible.overrides["condition_i"] = 1e-30;
  VerificationReport rep = run_verification(h1, norm, {"i"}, cfg, impossible);
  CHECK(!rep.all_pass());
}

TEST_CASE("ring capacity: classical Newtonian value on euclid3") {
  const GroupSpec& e3 = builtin_group("euclid3");
  HomNorm n = natural_norm(e3);
  const double cap = ring_capacity(e3, n, RingSpec{1.0, 2.0, 2.0}, 1e-9);
  const double expected = 4.0 * kPi / (1.0 - 0.5);  // 4 pi (1/a - 1/b)^{-1}
  CHECK(std::abs(cap - expected) <= 1e-6 * expected);
}

TEST_CASE("ring capacity: dilation scaling law on heis1") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm n = natural_norm(h1);
  for (double p : {2.0, 3.0}) {
    const double c1 = ring_capacity(h1, n, RingSpec{1.0, 2.0, p}, 1e-9);
    const double c2 = ring_capacity(h1, n, RingSpec{2.0, 4.0, p}, 1e-9);
    const double factor = std::pow(2.0, h1.hom_dimension - p);
    CHECK(std::abs(c2 - factor * c1) <= 1e-8 * std::abs(factor * c1));
  }
}

TEST_CASE("ring capacity: conformal invariance at p = Q") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm n = natural_norm(h1);
  const double p = static_cast<double>(h1.hom_dimension);
  const double c1 = ring_capacity(h1, n, RingSpec{1.0, 2.0, p}, 1e-9);
  const double c2 = ring_capacity(h1, n, RingSpec{3.0, 6.0, p}, 1e-9);
  CHECK(std::abs(c1 - c2) <= 1e-6 * std::abs(c1));
}

TEST_CASE("ring capacity decreases in the outer radius") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm n = natural_norm(h1);
  const double a = 1.0;
  double prev = std::numeric_limits<double>::infinity();
  for (double b : {1.5, 2.5, 4.0}) {
    const double cap = ring_capacity(h1, n, RingSpec{a, b, 2.0}, 1e-8);
    CHECK(cap < prev);
    prev = cap;
  }
}

TEST_CASE("ring capacity input validation") {
  const GroupSpec& h1 = builtin_group("heis1");
  HomNorm n = natural_norm(h1);
  CHECK_THROWS_AS(ring_capacity(h1, n, RingSpec{2.0, 1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(ring_capacity(h1, n, RingSpec{1.0, 2.0, 0.5}), InvalidArgument);
}

}  // TEST_SUITE
