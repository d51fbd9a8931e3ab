#pragma once

// Parameter grids over the triangle and line configurations, and the
// optimal-coupling search.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "udw/errors.hpp"
#include "udw/pipeline.hpp"
#include "udw/scenario.hpp"

namespace udw {

enum class Configuration { triangle, line };

inline std::string to_string(Configuration c) { return c == Configuration::triangle ? "triangle" : "line"; }

inline Configuration configuration_from_string(const std::string& s) {
  if (s == "triangle") return Configuration::triangle;
  if (s == "line") return Configuration::line;
  throw ValidationError("configuration must be 'triangle' or 'line', got '" + s + "'");
}

// Template for one of the two standard geometries.
//
// triangle: A=(0,0,0), B=(L,0,0), C=(L/2, L sqrt(3)/2, 0)
// line:     A=(0,0,0), B=(L_AB,0,0), C=(L_AC,0,0)
// Switching times default to T_A=0, T_B=T, T_C=2T; any of them can be pinned.
// On the line, T_BC pins T_B and T_C to one common value.
struct ScenarioParams {
  Configuration kind = Configuration::triangle;
  double L = 0.4;
  double T = 0.25;
  double L_AB = 0.4;
  double L_AC = 0.2;
  std::optional<double> T_A, T_B, T_C;
  double lambda = 10.0;
  double sigma = 1.0;
  double Omega = 1.0;
  SmearingNorm norm = SmearingNorm::unit;
  Tolerances tolerances;
};

inline const std::vector<std::string>& parameter_names(Configuration kind) {
  static const std::vector<std::string> tri{"L", "T", "T_A", "T_B", "T_C", "lambda", "sigma", "Omega"};
  static const std::vector<std::string> lin{"L_AB", "L_AC", "T", "T_A", "T_B", "T_C", "T_BC", "lambda", "sigma", "Omega"};
  return kind == Configuration::triangle ? tri : lin;
}

inline void set_parameter(ScenarioParams& p, const std::string& name, double value) {
  const auto& names = parameter_names(p.kind);
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ValidationError("parameter '" + name + "' does not apply to the " + to_string(p.kind) + " configuration");
  }
  if (name == "L") p.L = value;
  else if (name == "T") p.T = value;
  else if (name == "L_AB") p.L_AB = value;
  else if (name == "L_AC") p.L_AC = value;
  else if (name == "T_A") p.T_A = value;
  else if (name == "T_B") p.T_B = value;
  else if (name == "T_C") p.T_C = value;
  else if (name == "T_BC") p.T_B = p.T_C = value;
  else if (name == "lambda") p.lambda = value;
  else if (name == "sigma") p.sigma = value;
  else if (name == "Omega") p.Omega = value;
}

inline ScenarioConfig build_configuration(const ScenarioParams& p) {
  auto require_length = [](double v, const char* name) {
    if (!std::isfinite(v)) throw ValidationError(std::string(name) + " must be finite");
    if (v < 0.0) throw ValidationError(std::string(name) + " must be non-negative");
  };
  DetectorSpec base;
  base.gap = p.Omega;
  base.coupling = p.lambda;
  base.smearing_width = p.sigma;
  base.smearing_norm = p.norm;
  DetectorSpec a = base, b = base, c = base;
  if (p.kind == Configuration::triangle) {
    require_length(p.L, "L");
    a.position = {0.0, 0.0, 0.0};
    b.position = {p.L, 0.0, 0.0};
    c.position = {0.5 * p.L, 0.5 * std::sqrt(3.0) * p.L, 0.0};
  } else {
    require_length(p.L_AB, "L_AB");
    require_length(p.L_AC, "L_AC");
    a.position = {0.0, 0.0, 0.0};
    b.position = {p.L_AB, 0.0, 0.0};
    c.position = {p.L_AC, 0.0, 0.0};
  }
  a.switch_time = p.T_A.value_or(0.0);
  b.switch_time = p.T_B.value_or(p.T);
  c.switch_time = p.T_C.value_or(2.0 * p.T);
  return validate_and_order(make_detectors(a, b, c), p.tolerances);
}

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  double value(int i) const {
    if (count == 1) return min;
    // Endpoints exact; interior points by linear interpolation.
    if (i == count - 1) return max;
    return min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
};

struct SweepOutputs {
  bool pi = true;
  bool negativities = true;
  bool correlators = false;
};

struct SweepVariant {
  std::string name;
  ScenarioParams params;
};

struct SweepSpec {
  std::vector<SweepVariant> variants;
  Axis axis1;
  std::optional<Axis> axis2;
  SweepOutputs outputs;
  PipelineOptions pipeline;
  unsigned threads = 0;  // 0: hardware concurrency
};

inline constexpr double kZeroPiThreshold = 1e-12;

struct PointResult {
  bool ok = false;
  std::string error;
  EntanglementReport report;  // keyed by user labels
  CorrelatorSet correlators;  // keyed by user labels
  double pi = 0.0;            // pi_tangle with values below kZeroPiThreshold set to 0
  bool pi_zero = true;
  double wall_time = 0.0;     // seconds
};

struct SweepRow {
  std::array<double, 2> axis_values{0.0, std::numeric_limits<double>::quiet_NaN()};
  std::vector<PointResult> results;  // one per variant
};

inline void validate_axis(const Axis& ax, Configuration kind) {
  if (ax.count < 2) throw ValidationError("axis " + ax.name + ": count must be at least 2");
  if (!std::isfinite(ax.min) || !std::isfinite(ax.max)) throw ValidationError("axis " + ax.name + ": bounds must be finite");
  if (ax.min > ax.max) throw ValidationError("axis " + ax.name + ": min must not exceed max");
  const auto& names = parameter_names(kind);
  if (std::find(names.begin(), names.end(), ax.name) == names.end()) {
    throw ValidationError("axis '" + ax.name + "' does not apply to the " + to_string(kind) + " configuration");
  }
}

inline void validate_sweep(const SweepSpec& spec) {
  if (spec.variants.empty()) throw ValidationError("sweep needs at least one configuration");
  for (const auto& v : spec.variants) {
    validate_axis(spec.axis1, v.params.kind);
    if (spec.axis2) validate_axis(*spec.axis2, v.params.kind);
  }
  if (spec.axis2 && spec.axis2->name == spec.axis1.name) throw ValidationError("sweep axes must differ");
}

inline PointResult evaluate_point(const ScenarioParams& params, const PipelineOptions& opt) {
  PointResult r;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const auto cfg = build_configuration(params);
    const auto a = analyze(cfg, opt);
    r.report = to_user_order(a.report, cfg);
    r.correlators = to_user_order(a.correlators, cfg);
    r.pi_zero = r.report.pi_tangle < kZeroPiThreshold;
    r.pi = r.pi_zero ? 0.0 : r.report.pi_tangle;
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
  }
  r.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  validate_sweep(spec);
  const int n1 = spec.axis1.count;
  const int n2 = spec.axis2 ? spec.axis2->count : 1;
  const std::size_t nvar = spec.variants.size();
  std::vector<SweepRow> rows(static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      auto& row = rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(n2) + static_cast<std::size_t>(j)];
      row.axis_values[0] = spec.axis1.value(i);
      if (spec.axis2) row.axis_values[1] = spec.axis2->value(j);
      row.results.resize(nvar);
    }

  const std::size_t jobs = rows.size() * nvar;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      auto& row = rows[job / nvar];
      const std::size_t v = job % nvar;
      ScenarioParams p = spec.variants[v].params;
      try {
        set_parameter(p, spec.axis1.name, row.axis_values[0]);
        if (spec.axis2) set_parameter(p, spec.axis2->name, row.axis_values[1]);
        row.results[v] = evaluate_point(p, spec.pipeline);
      } catch (const std::exception& e) {
        row.results[v].ok = false;
        row.results[v].error = e.what();
      }
    }
  };
  unsigned threads = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

// pi-tangle as a function of the coupling, all else fixed by the template.
inline double pi_at_lambda(const ScenarioParams& tmpl, double lambda, const PipelineOptions& opt = {}) {
  ScenarioParams p = tmpl;
  p.lambda = lambda;
  return analyze(build_configuration(p), opt).report.pi_tangle;
}

struct OptimizeResult {
  double lambda_star = 0.0;
  double pi_star = 0.0;
  bool unimodal = true;  // false: pre-scan saw several maxima or the search lost to the incumbent
  int evaluations = 0;
  std::vector<std::pair<double, double>> scan;
};

// Golden-section maximization of pi over the coupling, after a 16-point
// pre-scan that picks the bracket around the best sample.
inline OptimizeResult optimize_lambda(const ScenarioParams& tmpl, double lo, double hi, double tol = 1e-3,
                                      const PipelineOptions& opt = {}) {
  if (!(lo >= 0.0) || !(hi > lo)) throw ValidationError("optimize: bracket must satisfy 0 <= lo < hi");
  if (!(tol > 0.0)) throw ValidationError("optimize: tolerance must be positive");
  OptimizeResult res;
  auto eval = [&](double lam) {
    ++res.evaluations;
    return pi_at_lambda(tmpl, lam, opt);
  };

  constexpr int kScan = 16;
  std::vector<double> xs(kScan), ys(kScan);
  for (int i = 0; i < kScan; ++i) {
    xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (kScan - 1);
    ys[static_cast<std::size_t>(i)] = eval(xs[static_cast<std::size_t>(i)]);
    res.scan.emplace_back(xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)]);
  }
  const auto best_it = std::max_element(ys.begin(), ys.end());
  const int best = static_cast<int>(best_it - ys.begin());
  if (*best_it < kZeroPiThreshold) {
    throw NoEntanglementError("optimize: pi-tangle vanishes on the whole bracket [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
  }
  int local_maxima = 0;
  for (int i = 0; i < kScan; ++i) {
    const double y = ys[static_cast<std::size_t>(i)];
    if (y < kZeroPiThreshold) continue;
    const bool left_ok = i == 0 || y > ys[static_cast<std::size_t>(i - 1)];
    const bool right_ok = i == kScan - 1 || y >= ys[static_cast<std::size_t>(i + 1)];
    if (left_ok && right_ok) ++local_maxima;
  }
  res.unimodal = local_maxima <= 1;

  double a = xs[static_cast<std::size_t>(std::max(best - 1, 0))];
  double b = xs[static_cast<std::size_t>(std::min(best + 1, kScan - 1))];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = eval(c), fd = eval(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = eval(d);
    }
  }
  const double x = 0.5 * (a + b);
  const double fx = eval(x);
  res.lambda_star = x;
  res.pi_star = fx;
  if (*best_it > fx) {
    res.lambda_star = xs[static_cast<std::size_t>(best)];
    res.pi_star = *best_it;
    res.unimodal = false;
  }
  return res;
}

// Named figure presets.
inline std::vector<std::string> preset_names() { return {"fig2", "fig3", "fig4", "fig5", "fig5-reversed"}; }

inline SweepSpec preset(const std::string& name) {
  SweepSpec s;
  ScenarioParams tri;
  tri.kind = Configuration::triangle;
  tri.lambda = 10.0;
  tri.sigma = 1.0;
  tri.Omega = 1.0;
  if (name == "fig2") {
    s.variants = {{"triangle", tri}};
    s.axis1 = {"L", 0.1, 3.0, 101};
    s.axis2 = Axis{"T", 0.0, 2.5, 101};
    s.outputs = {true, false, false};
  } else if (name == "fig3") {
    tri.T = 0.25;
    s.variants = {{"triangle", tri}};
    s.axis1 = {"L", 0.1, 3.0, 201};
    s.outputs = {true, true, false};
  } else if (name == "fig4") {
    tri.L = 0.4;
    tri.T = 0.25;
    ScenarioParams lin = tri;
    lin.kind = Configuration::line;
    lin.L_AB = 0.4;
    lin.L_AC = 0.2;
    s.variants = {{"triangle", tri}, {"line", lin}};
    s.axis1 = {"lambda", 0.1, 30.0, 201};
    s.outputs = {true, false, false};
  } else if (name == "fig5" || name == "fig5-reversed") {
    ScenarioParams lin;
    lin.kind = Configuration::line;
    lin.lambda = 2.5;
    lin.L_AB = 2.8;
    lin.T_A = 0.0;
    lin.T_B = 0.0;
    s.variants = {{"line", lin}};
    // Reversed: A switches first and B, C follow together.
    s.axis1 = name == "fig5" ? Axis{"T_C", 0.0, 3.0, 101} : Axis{"T_BC", 0.0, 3.0, 101};
    s.axis2 = Axis{"L_AC", 0.0, 2.8, 101};
    s.outputs = {true, false, false};
  } else {
    throw ValidationError("unknown preset '" + name + "'");
  }
  return s;
}

}  // namespace udw
