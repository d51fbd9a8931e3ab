#pragma once

// Text, CSV and JSON renderings of states, reports and sweeps.

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "udw/pipeline.hpp"
#include "udw/sweep.hpp"

namespace udw {

using json = nlohmann::json;

// 17 significant digits, enough to round-trip a double.
inline std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline const std::array<std::string, 8>& basis_labels() {
  static const std::array<std::string, 8> labels{"000", "001", "010", "100", "011", "101", "110", "111"};
  return labels;
}

// Report keyed by user labels: {negativity: {A_BC, B_AC, C_AB, A_B, A_C, B_C}, pi: {A, B, C, total}}.
inline json report_to_json(const EntanglementReport& user) {
  json j;
  j["negativity"] = {{"A_BC", user.one_vs_rest[0]}, {"B_AC", user.one_vs_rest[1]}, {"C_AB", user.one_vs_rest[2]},
                     {"A_B", user.pairwise[0]},     {"A_C", user.pairwise[1]},     {"B_C", user.pairwise[2]}};
  j["pi"] = {{"A", user.pi_components[0]}, {"B", user.pi_components[1]}, {"C", user.pi_components[2]},
             {"total", user.pi_tangle}};
  j["pi_raw"] = user.pi_raw;
  return j;
}

inline EntanglementReport report_from_json(const json& j) {
  EntanglementReport r;
  const auto& n = j.at("negativity");
  r.one_vs_rest = {n.at("A_BC").get<double>(), n.at("B_AC").get<double>(), n.at("C_AB").get<double>()};
  r.pairwise = {n.at("A_B").get<double>(), n.at("A_C").get<double>(), n.at("B_C").get<double>()};
  const auto& p = j.at("pi");
  r.pi_components = {p.at("A").get<double>(), p.at("B").get<double>(), p.at("C").get<double>()};
  r.pi_tangle = p.at("total").get<double>();
  r.pi_raw = j.value("pi_raw", r.pi_tangle);
  return r;
}

inline json correlators_to_json(const CorrelatorSet& user) {
  json j;
  j["f"] = {{"A", std::exp(user.log_f[0])}, {"B", std::exp(user.log_f[1])}, {"C", std::exp(user.log_f[2])}};
  j["log_f"] = {{"A", user.log_f[0]}, {"B", user.log_f[1]}, {"C", user.log_f[2]}};
  j["theta"] = {{"AB", user.theta[0]}, {"AC", user.theta[1]}, {"BC", user.theta[2]}};
  j["omega"] = {{"AB", user.omega[0]}, {"AC", user.omega[1]}, {"BC", user.omega[2]}};
  j["quadrature_error"] = user.err;
  j["cross_check_difference"] = user.cross_check_diff;
  return j;
}

inline json rho_to_json(const DensityMatrix8& rho) {
  json re = json::array(), im = json::array();
  for (int i = 0; i < 8; ++i) {
    json rr = json::array(), ri = json::array();
    for (int k = 0; k < 8; ++k) {
      rr.push_back(rho(i, k).real());
      ri.push_back(rho(i, k).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"basis", basis_labels()}, {"re", re}, {"im", im}};
}

inline DensityMatrix8 rho_from_json(const json& j) {
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != 8 || im.size() != 8) throw ValidationError("rho must be 8x8");
  Matrix8c m;
  for (std::size_t i = 0; i < 8; ++i) {
    if (re[i].size() != 8 || im[i].size() != 8) throw ValidationError("rho must be 8x8");
    for (std::size_t k = 0; k < 8; ++k)
      m(static_cast<int>(i), static_cast<int>(k)) = cplx(re[i][k].get<double>(), im[i][k].get<double>());
  }
  return DensityMatrix8(m);
}

// The `state` subcommand payload. The matrix is stored in the canonical
// switching order; `slots` names the user label occupying each qubit.
inline json state_to_json(const ScenarioConfig& cfg, const Analysis& a) {
  json j;
  j["slots"] = {std::string(1, to_char(cfg.user_label(0))), std::string(1, to_char(cfg.user_label(1))),
                std::string(1, to_char(cfg.user_label(2)))};
  j["rho"] = rho_to_json(a.rho);
  j["report"] = report_to_json(to_user_order(a.report, cfg));
  j["correlators"] = correlators_to_json(to_user_order(a.correlators, cfg));
  return j;
}

inline void write_state_text(std::ostream& os, const ScenarioConfig& cfg, const Analysis& a) {
  os << "# rho_ABC, qubit order " << to_char(cfg.user_label(0)) << to_char(cfg.user_label(1))
     << to_char(cfg.user_label(2)) << " (switching order)\n";
  for (int i = 0; i < 8; ++i) {
    os << "|" << basis_labels()[static_cast<std::size_t>(i)] << ">";
    for (int k = 0; k < 8; ++k) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "  %+.6e%+.6ei", a.rho(i, k).real(), a.rho(i, k).imag());
      os << buf;
    }
    os << "\n";
  }
  const auto r = to_user_order(a.report, cfg);
  os << "N_A(BC) = " << fmt17(r.one_vs_rest[0]) << "\n"
     << "N_B(AC) = " << fmt17(r.one_vs_rest[1]) << "\n"
     << "N_C(AB) = " << fmt17(r.one_vs_rest[2]) << "\n"
     << "N_A(B)  = " << fmt17(r.pairwise[0]) << "\n"
     << "N_A(C)  = " << fmt17(r.pairwise[1]) << "\n"
     << "N_B(C)  = " << fmt17(r.pairwise[2]) << "\n"
     << "pi_A = " << fmt17(r.pi_components[0]) << "  pi_B = " << fmt17(r.pi_components[1])
     << "  pi_C = " << fmt17(r.pi_components[2]) << "\n"
     << "pi   = " << fmt17(r.pi_tangle) << "\n";
}

inline void write_correlators_text(std::ostream& os, const CorrelatorSet& user) {
  const char* pairs[3] = {"AB", "AC", "BC"};
  const char* dets[3] = {"A", "B", "C"};
  for (std::size_t i = 0; i < 3; ++i)
    os << "f_" << dets[i] << " = " << fmt17(std::exp(user.log_f[i])) << "  (log " << fmt17(user.log_f[i]) << ")\n";
  for (std::size_t p = 0; p < 3; ++p) os << "Theta_" << pairs[p] << " = " << fmt17(user.theta[p]) << "\n";
  for (std::size_t p = 0; p < 3; ++p) os << "omega_" << pairs[p] << " = " << fmt17(user.omega[p]) << "\n";
  os << "quadrature error estimate = " << fmt17(user.err) << "\n"
     << "closed form vs quadrature = " << fmt17(user.cross_check_diff) << "\n";
}

namespace detail {

inline std::vector<std::string> measure_columns(const SweepOutputs& o, bool timing) {
  std::vector<std::string> c;
  if (o.pi) c.insert(c.end(), {"pi", "pi_zero"});
  if (o.negativities) c.insert(c.end(), {"N_A_BC", "N_B_AC", "N_C_AB", "N_A_B", "N_A_C", "N_B_C"});
  if (o.correlators)
    c.insert(c.end(), {"f_A", "f_B", "f_C", "theta_AB", "theta_AC", "theta_BC", "omega_AB", "omega_AC", "omega_BC"});
  c.push_back("err");
  if (timing) c.push_back("wall_time");
  c.push_back("error");
  return c;
}

inline std::vector<std::string> measure_values(const PointResult& r, const SweepOutputs& o, bool timing) {
  std::vector<std::string> v;
  const auto& rep = r.report;
  const auto& c = r.correlators;
  auto num = [&](double x) { return r.ok ? fmt17(x) : std::string("nan"); };
  if (o.pi) {
    v.push_back(num(r.pi));
    v.push_back(r.ok ? (r.pi_zero ? "1" : "0") : "nan");
  }
  if (o.negativities) {
    for (double x : rep.one_vs_rest) v.push_back(num(x));
    for (double x : rep.pairwise) v.push_back(num(x));
  }
  if (o.correlators) {
    for (double x : c.log_f) v.push_back(num(std::exp(x)));
    for (double x : c.theta) v.push_back(num(x));
    for (double x : c.omega) v.push_back(num(x));
  }
  v.push_back(num(c.err));
  if (timing) v.push_back(fmt17(r.wall_time));
  std::string err = r.error;
  for (auto& ch : err)
    if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
  v.push_back(err);
  return v;
}

}  // namespace detail

inline void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<SweepRow>& rows,
                            bool timing = false) {
  const auto cols = detail::measure_columns(spec.outputs, timing);
  const bool suffix = spec.variants.size() > 1;
  os << spec.axis1.name;
  if (spec.axis2) os << "," << spec.axis2->name;
  for (const auto& var : spec.variants)
    for (const auto& c : cols) os << "," << c << (suffix ? "_" + var.name : "");
  os << "\n";
  for (const auto& row : rows) {
    os << fmt17(row.axis_values[0]);
    if (spec.axis2) os << "," << fmt17(row.axis_values[1]);
    for (const auto& r : row.results)
      for (const auto& v : detail::measure_values(r, spec.outputs, timing)) os << "," << v;
    os << "\n";
  }
}

inline json sweep_to_json(const SweepSpec& spec, const std::vector<SweepRow>& rows, bool timing = false) {
  json j;
  json axes = json::array();
  axes.push_back({{"name", spec.axis1.name}, {"min", spec.axis1.min}, {"max", spec.axis1.max}, {"count", spec.axis1.count}});
  if (spec.axis2)
    axes.push_back({{"name", spec.axis2->name}, {"min", spec.axis2->min}, {"max", spec.axis2->max}, {"count", spec.axis2->count}});
  j["axes"] = axes;
  json variants = json::array();
  for (const auto& v : spec.variants) variants.push_back({{"name", v.name}, {"configuration", to_string(v.params.kind)}});
  j["variants"] = variants;
  const auto cols = detail::measure_columns(spec.outputs, timing);
  json out_rows = json::array();
  for (const auto& row : rows) {
    json jr;
    jr["axis"] = spec.axis2 ? json{row.axis_values[0], row.axis_values[1]} : json{row.axis_values[0]};
    json results = json::array();
    for (const auto& r : row.results) {
      json m;
      const auto vals = detail::measure_values(r, spec.outputs, timing);
      for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "error") m["error"] = r.error;
        else if (cols[i] == "pi_zero") m["pi_zero"] = r.pi_zero;
        else m[cols[i]] = r.ok || cols[i] == "wall_time" ? json(std::stod(vals[i])) : json(nullptr);
      }
      results.push_back(m);
    }
    jr["results"] = results;
    out_rows.push_back(jr);
  }
  j["rows"] = out_rows;
  return j;
}

}  // namespace udw
