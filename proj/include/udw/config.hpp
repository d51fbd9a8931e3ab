#pragma once

// Flat key-value configuration files.
//
//   # comment
//   tolerance.quadrature = 1e-10
//   detector.A.position  = "0 0 0"
//   detector.A.time      = 0
//
// One `key = value` per line; values may be wrapped in double quotes; `#`
// starts a comment. Keys are case-sensitive. Unknown or repeated keys are
// errors that name the key and line.
//
// Scenario files (`state`, `correlators`):
//   detector.<X>.position = "x y z"     X in {A, B, C}; units of eta
//   detector.<X>.time     = T_X
//   detector.<X>.gap      = Omega_X     (default: default.gap, else 1)
//   detector.<X>.coupling = lambda_X    (default: default.coupling)
//   detector.<X>.sigma    = sigma_X     (default: default.sigma)
//   detector.<X>.smearing_norm = unit|peak (default: default.smearing_norm, else unit)
//   default.gap, default.coupling, default.sigma, default.smearing_norm
//   tolerance.quadrature, tolerance.eigen
//
// Sweep files (`sweep`):
//   sweep.configuration = triangle | line | "triangle line"
//   sweep.axis1 = "name min max count"
//   sweep.axis2 = "name min max count"   (optional)
//   sweep.outputs = "pi negativities correlators" (any subset, default "pi negativities")
//   param.<name> = value                 L, T, L_AB, L_AC, T_A, T_B, T_C, T_BC, lambda, sigma, Omega
//   param.smearing_norm = unit|peak
//   tolerance.quadrature, tolerance.eigen
//
// Optimization files (`optimize`):
//   optimize.configuration = triangle | line
//   optimize.bracket = "lo hi"
//   optimize.tolerance = 1e-3
//   param.<name> = value, tolerance.*

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "udw/errors.hpp"
#include "udw/scenario.hpp"
#include "udw/sweep.hpp"

namespace udw::config {

struct Entry {
  std::string value;
  int line = 0;
};

using KeyValues = std::map<std::string, Entry>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline KeyValues parse(const std::string& text) {
  KeyValues kv;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line;
    bool quoted = false;
    for (char c : raw) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      line += c;
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("line " + std::to_string(lineno) + ": empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    if (kv.count(key)) throw ValidationError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = {value, lineno};
  }
  return kv;
}

inline KeyValues parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

inline std::vector<double> to_numbers(const std::string& key, const Entry& e, std::size_t expected) {
  std::istringstream in(e.value);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ValidationError("line " + std::to_string(e.line) + ": '" + key + "' expects numbers, got '" + tok + "'");
    }
  }
  if (expected && out.size() != expected) {
    throw ValidationError("line " + std::to_string(e.line) + ": '" + key + "' expects " + std::to_string(expected) +
                          " value(s), got " + std::to_string(out.size()));
  }
  return out;
}

inline double to_number(const std::string& key, const Entry& e) { return to_numbers(key, e, 1)[0]; }

inline void reject_unknown(const KeyValues& kv, const std::set<std::string>& used) {
  for (const auto& [k, e] : kv) {
    if (!used.count(k)) throw ValidationError("line " + std::to_string(e.line) + ": unknown key '" + k + "'");
  }
}

inline Tolerances read_tolerances(const KeyValues& kv, std::set<std::string>& used) {
  Tolerances t;
  if (auto it = kv.find("tolerance.quadrature"); it != kv.end()) {
    t.quadrature = to_number(it->first, it->second);
    used.insert(it->first);
  }
  if (auto it = kv.find("tolerance.eigen"); it != kv.end()) {
    t.eigen = to_number(it->first, it->second);
    used.insert(it->first);
  }
  return t;
}

inline ScenarioConfig scenario_from(const KeyValues& kv) {
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> const Entry* {
    auto it = kv.find(key);
    if (it == kv.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto number_or = [&](const std::string& key, const std::string& fallback, std::optional<double> dflt) {
    if (const Entry* e = get(key)) return to_number(key, *e);
    if (const Entry* e = get(fallback)) return to_number(fallback, *e);
    if (dflt) return *dflt;
    throw ValidationError("missing key '" + key + "'");
  };

  std::array<DetectorSpec, 3> raw;
  for (int i = 0; i < 3; ++i) {
    const char name = static_cast<char>('A' + i);
    const std::string pre = std::string("detector.") + name + ".";
    auto& d = raw[static_cast<std::size_t>(i)];
    d.label = static_cast<Label>(i);
    const Entry* pos = get(pre + "position");
    if (!pos) throw ValidationError("missing key '" + pre + "position'");
    const auto p = to_numbers(pre + "position", *pos, 3);
    d.position = {p[0], p[1], p[2]};
    const Entry* t = get(pre + "time");
    if (!t) throw ValidationError("missing key '" + pre + "time'");
    d.switch_time = to_number(pre + "time", *t);
    d.gap = number_or(pre + "gap", "default.gap", 1.0);
    d.coupling = number_or(pre + "coupling", "default.coupling", std::nullopt);
    d.smearing_width = number_or(pre + "sigma", "default.sigma", std::nullopt);
    if (const Entry* e = get(pre + "smearing_norm")) d.smearing_norm = smearing_norm_from_string(e->value);
    else if (const Entry* e2 = get("default.smearing_norm")) d.smearing_norm = smearing_norm_from_string(e2->value);
  }
  // defaults that were not needed still count as known keys
  for (const char* k : {"default.gap", "default.coupling", "default.sigma", "default.smearing_norm"})
    if (kv.count(k)) used.insert(k);
  const Tolerances tol = read_tolerances(kv, used);
  reject_unknown(kv, used);
  return validate_and_order(raw, tol);
}

inline void read_params(const KeyValues& kv, ScenarioParams& p, std::set<std::string>& used) {
  for (const auto& [k, e] : kv) {
    if (k.rfind("param.", 0) != 0) continue;
    const std::string name = k.substr(6);
    used.insert(k);
    if (name == "smearing_norm") {
      p.norm = smearing_norm_from_string(e.value);
      continue;
    }
    try {
      set_parameter(p, name, to_number(k, e));
    } catch (const ValidationError& err) {
      throw ValidationError("line " + std::to_string(e.line) + ": " + err.what());
    }
  }
}

inline Axis parse_axis(const std::string& key, const Entry& e) {
  std::istringstream in(e.value);
  Axis a;
  std::string mn, mx, cnt;
  if (!(in >> a.name >> mn >> mx >> cnt)) {
    throw ValidationError("line " + std::to_string(e.line) + ": '" + key + "' expects 'name min max count'");
  }
  a.min = to_number(key, {mn, e.line});
  a.max = to_number(key, {mx, e.line});
  const double c = to_number(key, {cnt, e.line});
  if (c != std::floor(c)) throw ValidationError("line " + std::to_string(e.line) + ": axis count must be an integer");
  a.count = static_cast<int>(c);
  return a;
}

inline SweepOutputs parse_outputs(const std::string& key, const Entry& e) {
  SweepOutputs o{false, false, false};
  std::istringstream in(e.value);
  std::string tok;
  while (in >> tok) {
    if (tok == "pi") o.pi = true;
    else if (tok == "negativities") o.negativities = true;
    else if (tok == "correlators") o.correlators = true;
    else throw ValidationError("line " + std::to_string(e.line) + ": unknown output '" + tok + "' in '" + key + "'");
  }
  return o;
}

inline std::vector<Configuration> parse_configurations(const Entry& e) {
  std::istringstream in(e.value);
  std::string tok;
  std::vector<Configuration> out;
  while (in >> tok) out.push_back(configuration_from_string(tok));
  if (out.empty()) throw ValidationError("line " + std::to_string(e.line) + ": configuration list is empty");
  return out;
}

inline SweepSpec sweep_from(const KeyValues& kv) {
  std::set<std::string> used;
  SweepSpec s;
  auto require = [&](const std::string& key) -> const Entry& {
    auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError("missing key '" + key + "'");
    used.insert(key);
    return it->second;
  };
  const auto kinds = parse_configurations(require("sweep.configuration"));
  s.axis1 = parse_axis("sweep.axis1", require("sweep.axis1"));
  if (auto it = kv.find("sweep.axis2"); it != kv.end()) {
    used.insert(it->first);
    s.axis2 = parse_axis(it->first, it->second);
  }
  if (auto it = kv.find("sweep.outputs"); it != kv.end()) {
    used.insert(it->first);
    s.outputs = parse_outputs(it->first, it->second);
  }
  const Tolerances tol = read_tolerances(kv, used);
  for (auto kind : kinds) {
    ScenarioParams p;
    p.kind = kind;
    p.tolerances = tol;
    read_params(kv, p, used);
    s.variants.push_back({to_string(kind), p});
  }
  reject_unknown(kv, used);
  validate_sweep(s);
  return s;
}

struct OptimizeSpec {
  ScenarioParams params;
  double lo = 0.1;
  double hi = 30.0;
  double tolerance = 1e-3;
};

inline OptimizeSpec optimize_from(const KeyValues& kv) {
  std::set<std::string> used;
  OptimizeSpec o;
  auto it = kv.find("optimize.configuration");
  if (it == kv.end()) throw ValidationError("missing key 'optimize.configuration'");
  used.insert(it->first);
  o.params.kind = configuration_from_string(trim(it->second.value));
  if (auto b = kv.find("optimize.bracket"); b != kv.end()) {
    used.insert(b->first);
    const auto v = to_numbers(b->first, b->second, 2);
    o.lo = v[0];
    o.hi = v[1];
  }
  if (auto t = kv.find("optimize.tolerance"); t != kv.end()) {
    used.insert(t->first);
    o.tolerance = to_number(t->first, t->second);
  }
  o.params.tolerances = read_tolerances(kv, used);
  read_params(kv, o.params, used);
  reject_unknown(kv, used);
  return o;
}

}  // namespace udw::config
