#pragma once

// Command-line front end for the udwharvest tool.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure or failed
// self-checks. Errors are also written to the diagnostic stream as one JSON
// object: {"error": {"kind": ..., "message": ...}, "exit_code": N}.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "udw/config.hpp"
#include "udw/serialize.hpp"
#include "udw/sweep.hpp"
#include "udw/validation.hpp"

namespace udw::cli {

enum ExitCode : int { kOk = 0, kInvalidInput = 1, kNumericalFailure = 2 };

struct Invocation {
  std::string subcommand;
  std::string config;
  std::string output;
  std::string format;
  std::optional<double> rel_tol;
  std::optional<double> eig_tol;
  std::string preset;
  std::string kind;
  std::vector<std::string> params;
  std::string axis1, axis2, outputs;
  std::string bracket;
  double opt_tol = 1e-3;
  unsigned threads = 0;
  bool timing = false;
  std::uint64_t seed = 0;
  int scenarios = 200;
  bool inject_theta_flip = false;
};

inline const char* kHelpFooter =
    "Units: every length, switching time and smearing width is in units of the\n"
    "switching strength eta; gaps are in units of 1/eta; couplings are dimensionless.\n"
    "\n"
    "Exit codes:\n"
    "  0  success\n"
    "  1  invalid input (bad flag, config key or parameter value)\n"
    "  2  numerical failure (quadrature, cross-check, state invariant) or failed validate checks\n";

namespace detail {

inline Tolerances apply_tolerances(Tolerances t, const Invocation& inv) {
  if (inv.rel_tol) t.quadrature = *inv.rel_tol;
  if (inv.eig_tol) t.eigen = *inv.eig_tol;
  if (!(t.quadrature > 0.0) || !(t.eigen > 0.0)) throw ValidationError("tolerances must be positive");
  return t;
}

inline std::pair<std::string, double> split_param(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ValidationError("--param expects name=value, got '" + s + "'");
  const std::string name = config::trim(s.substr(0, eq));
  return {name, config::to_number("--param " + name, {config::trim(s.substr(eq + 1)), 0})};
}

inline void apply_params(ScenarioParams& p, const std::vector<std::string>& params) {
  for (const auto& s : params) {
    if (s.rfind("smearing_norm=", 0) == 0) {
      p.norm = smearing_norm_from_string(s.substr(14));
      continue;
    }
    const auto [name, value] = split_param(s);
    set_parameter(p, name, value);
  }
}

inline ScenarioParams params_from_flags(const Invocation& inv) {
  ScenarioParams p;
  if (!inv.kind.empty()) p.kind = configuration_from_string(inv.kind);
  apply_params(p, inv.params);
  p.tolerances = apply_tolerances(p.tolerances, inv);
  return p;
}

inline Axis axis_from_flag(const std::string& flag, const std::string& text) {
  return config::parse_axis(flag, {text, 0});
}

inline ScenarioConfig scenario_from(const Invocation& inv) {
  if (!inv.config.empty()) {
    if (!inv.kind.empty() || !inv.params.empty()) {
      throw ValidationError("--config excludes --kind and --param");
    }
    ScenarioConfig cfg = config::scenario_from(config::parse_file(inv.config));
    cfg.tolerances = apply_tolerances(cfg.tolerances, inv);
    return cfg;
  }
  return build_configuration(params_from_flags(inv));
}

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ValidationError("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

inline std::string format_or(const Invocation& inv, const std::string& dflt, std::initializer_list<const char*> allowed) {
  const std::string f = inv.format.empty() ? dflt : inv.format;
  for (const char* a : allowed)
    if (f == a) return f;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : ", ") + a;
  throw ValidationError("--format " + f + " is not available for '" + inv.subcommand + "' (use " + list + ")");
}

inline int run_state(const Invocation& inv, std::ostream& out) {
  const std::string fmt = format_or(inv, "text", {"text", "json", "csv"});
  const auto cfg = scenario_from(inv);
  const auto a = analyze(cfg);
  Output o(inv.output, out);
  if (fmt == "json") {
    o.stream() << state_to_json(cfg, a).dump(2) << "\n";
  } else if (fmt == "csv") {
    o.stream() << "row,col,re,im\n";
    for (int i = 0; i < 8; ++i)
      for (int k = 0; k < 8; ++k)
        o.stream() << basis_labels()[static_cast<std::size_t>(i)] << "," << basis_labels()[static_cast<std::size_t>(k)]
                   << "," << fmt17(a.rho(i, k).real()) << "," << fmt17(a.rho(i, k).imag()) << "\n";
  } else {
    write_state_text(o.stream(), cfg, a);
  }
  return kOk;
}

inline int run_correlators(const Invocation& inv, std::ostream& out) {
  const std::string fmt = format_or(inv, "text", {"text", "json", "csv"});
  const auto cfg = scenario_from(inv);
  const auto user = to_user_order(correlators_for(cfg), cfg);
  Output o(inv.output, out);
  if (fmt == "json") {
    o.stream() << correlators_to_json(user).dump(2) << "\n";
  } else if (fmt == "csv") {
    const char* dets[3] = {"A", "B", "C"};
    const char* pairs[3] = {"AB", "AC", "BC"};
    o.stream() << "name,value\n";
    for (std::size_t i = 0; i < 3; ++i) o.stream() << "f_" << dets[i] << "," << fmt17(std::exp(user.log_f[i])) << "\n";
    for (std::size_t p = 0; p < 3; ++p) o.stream() << "theta_" << pairs[p] << "," << fmt17(user.theta[p]) << "\n";
    for (std::size_t p = 0; p < 3; ++p) o.stream() << "omega_" << pairs[p] << "," << fmt17(user.omega[p]) << "\n";
    o.stream() << "err," << fmt17(user.err) << "\n";
  } else {
    write_correlators_text(o.stream(), user);
  }
  return kOk;
}

inline SweepSpec sweep_spec_from(const Invocation& inv) {
  SweepSpec s;
  if (!inv.preset.empty()) {
    if (!inv.kind.empty()) throw ValidationError("--preset excludes --kind");
    s = preset(inv.preset);
  } else if (!inv.config.empty()) {
    if (!inv.kind.empty()) throw ValidationError("--config excludes --kind");
    s = config::sweep_from(config::parse_file(inv.config));
  } else {
    if (inv.axis1.empty()) throw ValidationError("sweep needs --config, --preset or --axis1");
    ScenarioParams p;
    if (!inv.kind.empty()) p.kind = configuration_from_string(inv.kind);
    s.variants = {{to_string(p.kind), p}};
  }
  if (!inv.axis1.empty()) s.axis1 = axis_from_flag("--axis1", inv.axis1);
  if (!inv.axis2.empty()) s.axis2 = axis_from_flag("--axis2", inv.axis2);
  if (!inv.outputs.empty()) s.outputs = config::parse_outputs("--outputs", {inv.outputs, 0});
  for (auto& v : s.variants) {
    apply_params(v.params, inv.params);
    v.params.tolerances = apply_tolerances(v.params.tolerances, inv);
  }
  s.threads = inv.threads;
  validate_sweep(s);
  return s;
}

inline int run_sweep_cmd(const Invocation& inv, std::ostream& out) {
  const std::string fmt = format_or(inv, "csv", {"csv", "json"});
  const auto spec = sweep_spec_from(inv);
  const auto rows = run_sweep(spec);
  Output o(inv.output, out);
  if (fmt == "json") o.stream() << sweep_to_json(spec, rows, inv.timing).dump(2) << "\n";
  else write_sweep_csv(o.stream(), spec, rows, inv.timing);
  return kOk;
}

inline int run_optimize(const Invocation& inv, std::ostream& out) {
  const std::string fmt = format_or(inv, "text", {"text", "json"});
  std::vector<SweepVariant> variants;
  double lo = 0.1, hi = 30.0, tol = inv.opt_tol;
  if (!inv.preset.empty()) {
    if (!inv.kind.empty()) throw ValidationError("--preset excludes --kind");
    const auto s = preset(inv.preset);
    variants = s.variants;
    if (s.axis1.name == "lambda") {
      lo = s.axis1.min;
      hi = s.axis1.max;
    }
  } else if (!inv.config.empty()) {
    if (!inv.kind.empty()) throw ValidationError("--config excludes --kind");
    const auto spec = config::optimize_from(config::parse_file(inv.config));
    variants = {{to_string(spec.params.kind), spec.params}};
    lo = spec.lo;
    hi = spec.hi;
    tol = spec.tolerance;
  } else {
    ScenarioParams p;
    if (!inv.kind.empty()) p.kind = configuration_from_string(inv.kind);
    variants = {{to_string(p.kind), p}};
  }
  if (!inv.bracket.empty()) {
    const auto v = config::to_numbers("--bracket", {inv.bracket, 0}, 2);
    lo = v[0];
    hi = v[1];
  }
  for (auto& v : variants) {
    apply_params(v.params, inv.params);
    v.params.tolerances = apply_tolerances(v.params.tolerances, inv);
  }

  json results = json::array();
  std::ostringstream text;
  for (const auto& v : variants) {
    const auto r = optimize_lambda(v.params, lo, hi, tol);
    results.push_back({{"configuration", v.name},
                       {"lambda_star", r.lambda_star},
                       {"pi_star", r.pi_star},
                       {"unimodal", r.unimodal},
                       {"evaluations", r.evaluations},
                       {"bracket", {lo, hi}}});
    text << v.name << ": lambda* = " << fmt17(r.lambda_star) << "  pi* = " << fmt17(r.pi_star)
         << "  evaluations = " << r.evaluations << (r.unimodal ? "" : "  (pre-scan not unimodal)") << "\n";
  }
  Output o(inv.output, out);
  if (fmt == "json") o.stream() << json{{"results", results}}.dump(2) << "\n";
  else o.stream() << text.str();
  return kOk;
}

inline int run_validate(const Invocation& inv, std::ostream& out) {
  const std::string fmt = format_or(inv, "text", {"text", "json"});
  if (inv.scenarios < 1) throw ValidationError("--scenarios must be at least 1");
  ValidationOptions opt;
  opt.scenarios = inv.scenarios;
  opt.correlator_sets = inv.scenarios;
  opt.flip_theta_ab = inv.inject_theta_flip;
  const auto rep = run_validation_suite(inv.seed, opt);
  Output o(inv.output, out);
  if (fmt == "json") {
    json checks = json::array();
    for (const auto& c : rep.checks) {
      checks.push_back({{"name", c.name},
                        {"passed", c.passed},
                        {"observed", c.observed},
                        {"tolerance", c.tolerance},
                        {"bound", c.upper_bound ? "upper" : "lower"},
                        {"detail", c.detail}});
    }
    o.stream() << json{{"seed", rep.seed}, {"passed", rep.all_passed()}, {"checks", checks}}.dump(2) << "\n";
  } else {
    write_validation_text(o.stream(), rep);
  }
  return rep.all_passed() ? kOk : kNumericalFailure;
}

inline int report_error(std::ostream& err, const char* kind, const std::string& message, int code) {
  err << json{{"error", {{"kind", kind}, {"message", message}}}, {"exit_code", code}}.dump() << "\n";
  return code;
}

}  // namespace detail

inline int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                              std::ostream& err = std::cerr) {
  Invocation inv;
  CLI::App app{"Tripartite entanglement harvesting with delta-switched Unruh-DeWitt detectors", "udwharvest"};
  app.footer(kHelpFooter);
  app.require_subcommand(1, 1);

  auto common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", inv.output, "Write results to this file instead of stdout");
    sub->add_option("--format", inv.format, "Output format: text, csv or json")
        ->check(CLI::IsMember({"text", "csv", "json"}));
    sub->add_option("--rel-tol", inv.rel_tol, "Relative tolerance of the radial quadrature (default 1e-10)");
    sub->add_option("--eig-tol", inv.eig_tol, "Hermiticity tolerance on assembled states (default 1e-12)");
  };
  auto scenario_flags = [&](CLI::App* sub, bool with_preset) {
    auto* cfg = sub->add_option("--config", inv.config, "Key-value config file")->check(CLI::ExistingFile);
    if (with_preset) {
      auto* pre = sub->add_option("--preset", inv.preset, "Named figure preset")
                      ->check(CLI::IsMember(preset_names()));
      pre->excludes(cfg);
    }
    sub->add_option("--kind", inv.kind, "Geometry when no config is given: triangle or line")
        ->check(CLI::IsMember({"triangle", "line"}));
    sub->add_option("--param", inv.params,
                    "Override a geometry parameter, name=value (L, T, L_AB, L_AC, T_A, T_B, T_C, T_BC, lambda, "
                    "sigma, Omega, smearing_norm); repeatable");
  };

  auto* state = app.add_subcommand("state", "Print the three-detector density matrix and its entanglement report");
  common(state);
  scenario_flags(state, false);

  auto* corr = app.add_subcommand("correlators", "Print f_D, Theta_DE and omega_DE for a scenario");
  common(corr);
  scenario_flags(corr, false);

  auto* sweep = app.add_subcommand("sweep", "Evaluate entanglement measures over a 1D or 2D parameter grid");
  common(sweep);
  scenario_flags(sweep, true);
  sweep->add_option("--axis1", inv.axis1, "First axis: \"name min max count\"");
  sweep->add_option("--axis2", inv.axis2, "Second axis: \"name min max count\"");
  sweep->add_option("--outputs", inv.outputs, "Any of \"pi negativities correlators\"");
  sweep->add_option("--threads", inv.threads, "Worker threads (0: all cores)");
  sweep->add_flag("--timing", inv.timing, "Add a wall_time column (makes output nondeterministic)");

  auto* opt = app.add_subcommand("optimize", "Find the coupling that maximizes the pi-tangle");
  common(opt);
  scenario_flags(opt, true);
  opt->add_option("--bracket", inv.bracket, "Coupling search interval: \"lo hi\" (default \"0.1 30\")");
  opt->add_option("--tol", inv.opt_tol, "Width of the final coupling interval (default 1e-3)");

  auto* val = app.add_subcommand("validate", "Run the seeded invariant suite and report each check");
  common(val);
  val->add_option("--seed", inv.seed, "Random seed (default 0)");
  val->add_option("--scenarios", inv.scenarios, "Random scenarios per check (default 200)");
  val->add_flag("--inject-theta-flip", inv.inject_theta_flip,
                "Test hook: flip the sign of Theta_AB before assembly; the psd check must then fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return detail::report_error(err, "usage", e.what(), kInvalidInput);
  }

  try {
    if (state->parsed()) inv.subcommand = "state";
    else if (corr->parsed()) inv.subcommand = "correlators";
    else if (sweep->parsed()) inv.subcommand = "sweep";
    else if (opt->parsed()) inv.subcommand = "optimize";
    else inv.subcommand = "validate";

    if (inv.subcommand == "state") return detail::run_state(inv, out);
    if (inv.subcommand == "correlators") return detail::run_correlators(inv, out);
    if (inv.subcommand == "sweep") return detail::run_sweep_cmd(inv, out);
    if (inv.subcommand == "optimize") return detail::run_optimize(inv, out);
    const int code = detail::run_validate(inv, out);
    if (code != kOk) detail::report_error(err, "check_failure", "one or more validation checks failed", code);
    return code;
  } catch (const std::invalid_argument& e) {
    return detail::report_error(err, "validation", e.what(), kInvalidInput);
  } catch (const NoEntanglementError& e) {
    return detail::report_error(err, "no_entanglement", e.what(), kNumericalFailure);
  } catch (const std::exception& e) {
    return detail::report_error(err, "numerical", e.what(), kNumericalFailure);
  }
}

}  // namespace udw::cli
