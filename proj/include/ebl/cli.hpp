#pragma once

// Command-line driver: orbit, locus and invariants subcommands.
//
// Exit codes: 0 success, 1 an asserted check failed, 2 invalid
// configuration, 3 orbit search did not converge.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ebl/billiard.hpp"
#include "ebl/error.hpp"
#include "ebl/invariants.hpp"
#include "ebl/locus.hpp"
#include "ebl/report.hpp"

namespace ebl::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInvalidConfig = 2, kNoConvergence = 3 };

struct RunConfig {
  std::string subcommand;
  double a = 1.0;
  double b = 1.0;
  int n = 3;
  int samples = 256;
  double t0 = 0.0;
  std::vector<std::string> centers;
  std::string format = "json";
  std::string out;
  bool allow_self_intersecting = false;
  int winding = 1;
};

inline json config_json(const RunConfig& c) {
  json j;
  j["subcommand"] = c.subcommand;
  j["a"] = c.a;
  j["b"] = c.b;
  j["n"] = c.n;
  j["samples"] = c.samples;
  j["t0"] = c.t0;
  j["centers"] = c.centers;
  j["format"] = c.format;
  j["winding"] = c.winding;
  j["allow_self_intersecting"] = c.allow_self_intersecting;
  return j;
}

/// Throws InvalidArgument describing the first violated constraint.
inline void validate(const RunConfig& c) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (!(std::isfinite(c.a) && std::isfinite(c.b)) || !(c.b > 0.0) || c.a < c.b) fail("require a >= b > 0");
  if (c.n < 3) fail("require n >= 3");
  if (c.samples < 8) fail("require samples >= 8");
  if (c.subcommand == "invariants" && c.samples < 32) fail("invariant sweeps require samples >= 32");
  if (c.winding < 1) fail("require winding >= 1");
  if (c.winding > 1 && !c.allow_self_intersecting) fail("winding > 1 requires --allow-self-intersecting");
  if (c.format != "json" && c.format != "csv" && c.format != "svg") fail("format must be json, csv or svg");
  for (const auto& name : c.centers) {
    const auto sel = parse_selector(name);
    if (!sel) fail("unknown center '" + name + "'");
    if (sel->needs_triangle && c.n != 3) fail("center '" + name + "' needs --n 3");
  }
}

/// Computes the run; errors propagate as ebl::Error.
inline RunResult execute(const RunConfig& cfg) {
  validate(cfg);
  const Ellipse e(cfg.a, cfg.b);
  CausticSearchOptions copt;
  copt.allow_self_intersecting = cfg.allow_self_intersecting;
  const ConfocalCaustic caustic = find_caustic(e, cfg.n, cfg.winding, copt);
  const Orbit orbit = orbit_at(e, caustic, cfg.t0, cfg.n, cfg.winding);

  RunResult r;
  r.config = config_json(cfg);
  r.a = cfg.a;
  r.b = cfg.b;
  r.lambda = caustic.lambda();
  r.orbit = orbit.vertices;
  r.closure_defect = orbit.closure_defect;
  r.gamma = mean_gamma(e, orbit);
  r.perimeter = perimeter(orbit);

  if (cfg.subcommand == "orbit") return r;

  const int m = cfg.samples;
  OrbitFamily fam{e, cfg.n, cfg.winding, caustic, {}};
  fam.samples.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) fam.samples.push_back(orbit_at(e, caustic, kTwoPi * k / m, cfg.n, cfg.winding));
  const auto gl = gamma_and_perimeter(fam);
  r.gamma = gl.gamma;
  r.perimeter = gl.perimeter;

  if (cfg.subcommand == "locus") {
    const std::vector<std::string> centers = cfg.centers.empty() ? std::vector<std::string>{"X1"} : cfg.centers;
    for (const auto& name : centers) {
      auto sample = sweep_locus(fam, name);
      const auto pts = positions(sample);
      if (pts.size() >= 6) r.classes[name] = classify_locus(pts, e.a());
      r.loci.push_back(std::move(sample));
    }
    return r;
  }

  CheckOptions opt;
  opt.allow_self_intersecting = cfg.allow_self_intersecting;
  r.checks = run_family_checks(fam, opt);
  return r;
}

inline std::string render(const RunResult& r, const std::string& format) {
  if (format == "csv") return to_csv(r);
  const json doc = to_json(r);
  if (format == "svg") return render_svg(doc);
  return dump_json(doc);
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Elliptic billiard orbit families, loci and invariants"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "semi-major axis")->required();
    sub->add_option("--b", cfg.b, "semi-minor axis")->required();
    sub->add_option("--n", cfg.n, "number of bounces")->default_val(3);
    sub->add_option("--samples", cfg.samples, "family samples M")->default_val(256);
    sub->add_option("--t0", cfg.t0, "starting eccentric angle")->default_val(0.0);
    sub->add_option("--center", cfg.centers, "center or vertex selector (repeatable)");
    sub->add_option("--format", cfg.format, "json, csv or svg")->default_val("json");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
    sub->add_flag("--allow-self-intersecting", cfg.allow_self_intersecting, "experimental: winding > 1");
    sub->add_option("--winding", cfg.winding, "winding number (experimental)")->default_val(1);
  };
  for (const char* name : {"orbit", "locus", "invariants"}) {
    const char* help = std::string(name) == "orbit"       ? "one periodic orbit"
                       : std::string(name) == "locus"     ? "sweep centers over the family and classify"
                                                          : "run the invariant checks";
    add_common(app.add_subcommand(name, help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidConfig;
  }
  for (const auto* sub : app.get_subcommands()) cfg.subcommand = sub->get_name();

  RunResult result;
  try {
    result = execute(cfg);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::NoConvergence:
      case ErrorCode::ClosureFailure:
        return kNoConvergence;
      default:
        return kInvalidConfig;
    }
  }

  const std::string text = render(result, cfg.format);
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << cfg.out << "\n";
      return kInvalidConfig;
    }
    f << text;
  }
  if (cfg.subcommand == "invariants") {
    for (const auto& c : result.checks) {
      if (c.asserted && !c.pass) {
        err << "check failed: " << c.name << " (n=" << c.n << ", a/b=" << format_real(c.aspect_ratio, 6) << ")\n";
      }
    }
    if (!all_asserted_pass(result.checks)) return kCheckFailed;
  }
  return kOk;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"ebill"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace ebl::cli
