// polarcg: numerical toolkit for sub-Riemannian calculus on Carnot groups.
//
// Subcommands:
//   verify      residual suites for the equivalent characterizations
//   flow        sample horizontal radial flowlines (CSV / SVG)
//   integrate   polar / dilation / ambient integration of catalog integrands
//   capacity    p-capacity of a spherical ring {a < N < b}
//   emit-group  write a builtin group as a group-spec JSON file
//
// Exit codes: 0 success (all checks pass), 1 numerical failure or failed
// verification, 2 usage/config errors.

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "carnot/config.hpp"
#include "carnot/flow.hpp"
#include "carnot/groupfile.hpp"
#include "carnot/operators.hpp"
#include "carnot/quadrature.hpp"
#include "carnot/report.hpp"
#include "carnot/svg.hpp"
#include "carnot/verify.hpp"

namespace {

using namespace carnot;

struct CommonArgs {
  std::string group = "heis1";
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool serial = false;
};

RunConfig merge_config(const CommonArgs& args) {
  RunConfig cfg = args.config_path.empty() ? default_config_from_env()
                                           : load_config_file(args.config_path);
  if (!args.group.empty()) cfg.group = args.group;
  if (args.seed_set) cfg.seed = args.seed;
  return cfg;
}

std::map<std::string, double> parse_tols(const std::vector<std::string>& raw) {
  std::map<std::string, double> out;
  for (const auto& s : raw) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--tol expects name=value, got '" + s + "'");
    out[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

int cmd_verify(const CommonArgs& common, const std::string& conditions_arg,
               int points, const std::vector<std::string>& tol_args,
               const std::string& out_path) {
  RunConfig cfg = merge_config(common);
  for (const auto& [k, v] : parse_tols(tol_args)) cfg.tolerances[k] = v;

  GroupSpec spec = resolve_group(cfg.group);
  HomNorm norm = natural_norm(spec);

  std::vector<std::string> conditions;
  std::string token;
  for (char ch : conditions_arg + ",") {
    if (ch == ',') {
      if (!token.empty()) conditions.push_back(token);
      token.clear();
    } else {
      token += ch;
    }
  }

  SamplingConfig sampling;
  sampling.seed = cfg.seed ? *cfg.seed : SamplingConfig{}.seed;
  sampling.points = points;
  sampling.parallel = !common.serial;
  ToleranceSet tols{cfg.tolerances};

  const auto t0 = std::chrono::steady_clock::now();
  VerificationReport rep = run_verification(spec, norm, conditions, sampling, tols);
  const auto t1 = std::chrono::steady_clock::now();
  const double secs = std::chrono::duration<double>(t1 - t0).count();

  write_text(out_path.empty() ? cfg.out_path : out_path,
             render_report(rep, cfg.tolerances));
  std::cerr << "verify " << spec.name << ": "
            << (rep.all_pass() ? "all conditions pass" : "FAILURES present") << " ("
            << secs << " s)\n";
  return rep.all_pass() ? 0 : 1;
}

int cmd_flow(const CommonArgs& common, int curves, double s_lo, double s_hi,
             int samples, const std::string& csv_path, const std::string& svg_path,
             const std::string& projection) {
  RunConfig cfg = merge_config(common);
  GroupSpec spec = resolve_group(cfg.group);
  HomNorm norm = natural_norm(spec);
  SphereChart chart = make_sphere_chart(spec, norm, 0.2);

  // Deterministic fan of start points: theta sweeps the band, the first
  // angular coordinate advances by the golden angle.
  std::vector<Point> starts;
  const double golden = 2.399963229728653;
  for (int i = 0; i < curves; ++i) {
    Vec xi(chart.dims());
    for (int d = 0; d < chart.dims(); ++d) {
      const double t = (i + 0.5) / curves;
      xi[d] = d == 0 ? chart.lo[0] + (chart.hi[0] - chart.lo[0]) * t
                     : chart.lo[d] +
                           std::fmod(golden * (i + 1) + 0.7 * d, 1.0) *
                               (chart.hi[d] - chart.lo[d]);
    }
    starts.push_back(chart.map(xi));
  }

  std::string csv = "curve";
  for (int d = 0; d < spec.dim(); ++d) csv += ",a" + std::to_string(d + 1);
  csv += ",s";
  for (int d = 0; d < spec.dim(); ++d) csv += ",x" + std::to_string(d + 1);
  csv += ",N,speed\n";

  SvgPlot plot(640, 640);
  const double lim = s_hi * 1.05;
  if (projection == "rt")
    plot.set_view(0.0, lim, -lim * lim, lim * lim);
  else
    plot.set_view(-lim, lim, -lim, lim);

  for (int ci = 0; ci < curves; ++ci) {
    const Point& a = starts[static_cast<std::size_t>(ci)];
    const double speed = curve_speed(spec, norm, a);
    std::vector<std::pair<double, double>> pts;
    for (int k = 0; k < samples; ++k) {
      const double s =
          s_lo * std::pow(s_hi / s_lo, samples == 1 ? 0.0 : double(k) / (samples - 1));
      Point g = polar_curve(spec, norm, a, s);
      csv += std::to_string(ci);
      for (int d = 0; d < spec.dim(); ++d) csv += "," + format_double(a[d]);
      csv += "," + format_double(s);
      for (int d = 0; d < spec.dim(); ++d) csv += "," + format_double(g[d]);
      csv += "," + format_double(norm.value(g)) + "," + format_double(speed) + "\n";
      if (projection == "rt")
        pts.emplace_back(g.coords.head(spec.m()).norm(),
                         spec.is_step_two() ? g[spec.m()] : 0.0);
      else
        pts.emplace_back(g[0], g[1]);
    }
    plot.add_path(pts);
  }

  if (!csv_path.empty()) write_text(csv_path, csv);
  if (!svg_path.empty()) write_text(svg_path, plot.str());
  if (csv_path.empty() && svg_path.empty()) std::cout << csv;
  return 0;
}

int cmd_integrate(const CommonArgs& common, const std::string& integrand,
                  const std::string& method, std::int64_t samples, double tol,
                  const std::string& csv_path) {
  RunConfig cfg = merge_config(common);
  GroupSpec spec = resolve_group(cfg.group);
  HomNorm norm = natural_norm(spec);

  IntegrationJob job;
  job.spec = spec;
  job.norm = norm;
  job.integrand = catalog_integrand(spec, norm, integrand);
  job.method = method_from_name(method);
  job.tol = tol;
  job.mc_samples = samples;
  job.seed = cfg.seed ? *cfg.seed : 1;
  job.parallel = !common.serial;
  suggested_truncation(integrand, job);
  suggested_box(spec, norm, integrand, job.box_lo, job.box_hi);

  IntegrationResult res = integrate(job);

  ReportWriter w;
  w.section("integrate");
  w.kv("group", spec.name);
  w.kv("integrand", integrand);
  w.kv("method", method_name(res.method));
  w.kv("value", res.value);
  w.kv("error_estimate", res.error);
  w.kv("seed", static_cast<std::uint64_t>(res.seed));
  w.kv("evaluations", res.evaluations);
  for (const auto& sh : res.shells) {
    w.kv("shell_" + format_double(sh.n_lo) + "_" + format_double(sh.n_hi),
         std::to_string(sh.count) + " " + format_double(sh.sum));
  }
  std::cout << w.str();

  if (!csv_path.empty()) {
    std::string csv = "group,integrand,method,value,error,seed,evaluations\n";
    csv += spec.name + "," + integrand + "," + method_name(res.method) + "," +
           format_double(res.value) + "," + format_double(res.error) + "," +
           std::to_string(res.seed) + "," + std::to_string(res.evaluations) + "\n";
    write_text(csv_path, csv);
  }
  return 0;
}

int cmd_capacity(const CommonArgs& common, double p, double inner, double outer,
                 double tol) {
  RunConfig cfg = merge_config(common);
  GroupSpec spec = resolve_group(cfg.group);
  HomNorm norm = natural_norm(spec);
  RingSpec ring{inner, outer, p};
  const double cap = ring_capacity(spec, norm, ring, tol, !common.serial);
  ReportWriter w;
  w.section("capacity");
  w.kv("group", spec.name);
  w.kv("p", p);
  w.kv("inner", inner);
  w.kv("outer", outer);
  w.kv("value", cap);
  w.kv("tolerance", tol);
  w.kv("source", "verification.ring_capacity");
  std::cout << w.str();
  return 0;
}

int cmd_emit_group(const CommonArgs& common, const std::string& out_path) {
  RunConfig cfg = merge_config(common);
  GroupSpec spec = resolve_group(cfg.group);
  write_text(out_path, group_to_json(spec));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sub-Riemannian calculus on Carnot groups"};
  app.require_subcommand(1);

  CommonArgs common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", common.group, "builtin group name or spec-file path");
    sub->add_option("--config", common.config_path, "JSON config file");
    sub->add_flag("--serial", common.serial, "disable OpenMP kernels");
    auto* s = sub->add_option("--seed", common.seed, "RNG seed");
    s->each([&](const std::string&) { common.seed_set = true; });
  };

  // verify
  auto* verify = app.add_subcommand("verify", "run the residual suites");
  std::string conditions = "i,ii,iii";
  int points = 1000;
  std::vector<std::string> tol_args;
  std::string out_path;
  verify->add_option("--conditions", conditions, "comma list of i,ii,iii");
  verify->add_option("--points", points, "cloud size");
  verify->add_option("--tol", tol_args, "tolerance override name=value");
  verify->add_option("--out", out_path, "report path (default stdout)");
  add_common(verify);

  // flow
  auto* flow = app.add_subcommand("flow", "emit flowline samples");
  int curves = 8, flow_samples = 200;
  double s_lo = 0.25, s_hi = 4.0;
  std::string csv_path, svg_path, projection = "xy";
  flow->add_option("--curves", curves, "number of flowlines");
  flow->add_option("--s-min", s_lo, "radial start");
  flow->add_option("--s-max", s_hi, "radial end");
  flow->add_option("--samples", flow_samples, "samples per curve");
  flow->add_option("--csv", csv_path, "CSV output path");
  flow->add_option("--svg", svg_path, "SVG output path");
  flow->add_option("--projection", projection, "xy (x1,x2) or rt (||x||,t)");
  add_common(flow);

  // integrate
  auto* integ = app.add_subcommand("integrate", "integrate a catalog integrand");
  std::string integrand = "exp_n4", method = "polar", int_csv;
  std::int64_t samples = 10000000;
  double tol = 1e-7;
  integ->add_option("--integrand", integrand, "catalog integrand name");
  integ->add_option("--method", method, "polar|polar_arclength|dilation|tensor|mc");
  integ->add_option("--samples", samples, "MC sample count");
  integ->add_option("--tol", tol, "relative tolerance");
  integ->add_option("--csv", int_csv, "CSV output path");
  add_common(integ);

  // capacity
  auto* cap = app.add_subcommand("capacity", "ring capacity cap_p({a<N<b})");
  double cap_p = 2.0, cap_a = 1.0, cap_b = 2.0, cap_tol = 1e-9;
  cap->add_option("--p", cap_p, "exponent");
  cap->add_option("--inner", cap_a, "inner radius a");
  cap->add_option("--outer", cap_b, "outer radius b");
  cap->add_option("--tol", cap_tol, "relative tolerance");
  add_common(cap);

  // emit-group
  auto* emit = app.add_subcommand("emit-group", "write a group-spec JSON file");
  std::string emit_out;
  emit->add_option("--out", emit_out, "output path (default stdout)");
  add_common(emit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (verify->parsed())
      return cmd_verify(common, conditions, points, tol_args, out_path);
    if (flow->parsed())
      return cmd_flow(common, curves, s_lo, s_hi, flow_samples, csv_path, svg_path,
                      projection);
    if (integ->parsed())
      return cmd_integrate(common, integrand, method, samples, tol, int_csv);
    if (cap->parsed()) return cmd_capacity(common, cap_p, cap_a, cap_b, cap_tol);
    if (emit->parsed()) return cmd_emit_group(common, emit_out);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
