#pragma once

// Seeded self-check suite behind the `validate` subcommand.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "udw/pipeline.hpp"
#include "udw/sweep.hpp"

namespace udw {

// Random physical scenario: a triangle, a line, or three detectors at free
// positions. Lengths and times in [0, 3], lambda in [0, 12], sigma in [0.5, 2].
inline ScenarioConfig random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.0, 3.0), lam(0.0, 12.0), sig(0.5, 2.0), gap(0.1, 3.0);
  std::uniform_int_distribution<int> kind(0, 2);
  const int k = kind(rng);
  if (k < 2) {
    ScenarioParams p;
    p.kind = k == 0 ? Configuration::triangle : Configuration::line;
    p.L = len(rng);
    p.L_AB = len(rng);
    p.L_AC = len(rng);
    p.T = len(rng) / 2.0;
    p.lambda = lam(rng);
    p.sigma = sig(rng);
    p.Omega = gap(rng);
    return build_configuration(p);
  }
  std::array<DetectorSpec, 3> raw;
  for (auto& d : raw) {
    d.position = {len(rng), len(rng), len(rng)};
    d.switch_time = len(rng);
    d.gap = gap(rng);
    d.coupling = lam(rng);
    d.smearing_width = sig(rng);
  }
  return validate_and_order(make_detectors(raw[0], raw[1], raw[2]));
}

// Random correlator set: f in [0.05, 1], Theta and omega in [-0.3, 0.3].
inline CorrelatorSet random_correlators(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> f(0.05, 1.0), c(-0.3, 0.3);
  CorrelatorSet s;
  for (auto& x : s.log_f) x = std::log(f(rng));
  for (auto& x : s.theta) x = c(rng);
  for (auto& x : s.omega) x = c(rng);
  return s;
}

struct CheckResult {
  std::string name;
  double observed = 0.0;
  double tolerance = 0.0;
  bool upper_bound = true;  // true: pass iff observed <= tolerance; false: observed >= tolerance
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::uint64_t seed = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
};

struct ValidationOptions {
  int scenarios = 200;
  int correlator_sets = 200;
  bool flip_theta_ab = false;  // test hook: corrupts Theta_AB before assembly
};

namespace detail {

inline void add_check(ValidationReport& r, std::string name, double observed, double tol, bool upper,
                      std::string detail) {
  const bool ok = std::isfinite(observed) && (upper ? observed <= tol : observed >= tol);
  r.checks.push_back({std::move(name), observed, tol, upper, ok, std::move(detail)});
}

inline double report_diff(const EntanglementReport& a, const EntanglementReport& b) {
  double d = std::fabs(a.pi_tangle - b.pi_tangle);
  for (std::size_t i = 0; i < 3; ++i) {
    d = std::max({d, std::fabs(a.one_vs_rest[i] - b.one_vs_rest[i]), std::fabs(a.pairwise[i] - b.pairwise[i]),
                  std::fabs(a.pi_components[i] - b.pi_components[i])});
  }
  return d;
}

inline double spectrum_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

// Eigenvalues of rho, of its three partial transposes and of its three two-body marginals.
inline std::vector<std::vector<double>> spectra(const DensityMatrix8& rho) {
  std::vector<std::vector<double>> out;
  const Matrix8c t = rho.tensor();
  out.push_back(eigvals_hermitian(t));
  for (int q = 0; q < 3; ++q) out.push_back(eigvals_hermitian(partial_transpose(t, q)));
  for (const auto& p : kPairs) out.push_back(eigvals_hermitian(partial_trace(rho, {p[0], p[1]})));
  return out;
}

inline ScenarioConfig translated(const ScenarioConfig& cfg, const Vec3& dx, double dt) {
  ScenarioConfig out = cfg;
  for (auto& d : out.detectors) {
    for (std::size_t i = 0; i < 3; ++i) d.position[i] += dx[i];
    d.switch_time += dt;
  }
  return out;
}

}  // namespace detail

inline ValidationReport run_validation_suite(std::uint64_t seed, const ValidationOptions& opt = {}) {
  ValidationReport rep;
  rep.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  std::vector<ScenarioConfig> scenarios;
  for (int i = 0; i < opt.scenarios; ++i) scenarios.push_back(random_scenario(rng));

  // State invariants, no-go zeros and GHZ-type extraction.
  double herm = 0.0, trace = 0.0, min_eig = 0.0, parity = 0.0, pairwise = 0.0, max_pi = 0.0, cross = 0.0;
  std::vector<DensityMatrix8> states;
  std::vector<EntanglementReport> reports;
  for (const auto& cfg : scenarios) {
    CorrelatorSet corr = correlators_for(cfg);
    cross = std::max(cross, corr.cross_check_diff);
    if (opt.flip_theta_ab) corr.theta[0] = -corr.theta[0];
    const auto rho = assemble_rho_sum_unchecked(detail::excitation_phases(cfg), corr);
    const auto d = diagnose_state(rho);
    herm = std::max(herm, d.hermiticity);
    trace = std::max(trace, d.trace_error);
    min_eig = std::min(min_eig, d.min_eigenvalue);
    parity = std::max(parity, d.parity_leak);
    const auto r = pi_tangle(rho);
    for (double n : r.pairwise) pairwise = std::max(pairwise, n);
    max_pi = std::max(max_pi, r.pi_tangle);
    states.push_back(rho);
    reports.push_back(r);
  }
  const std::string over = "over " + std::to_string(opt.scenarios) + " random scenarios";
  detail::add_check(rep, "hermiticity", herm, 1e-12, true, "max |rho - rho^dagger| " + over);
  detail::add_check(rep, "unit_trace", trace, 1e-10, true, "max |Tr rho - 1| " + over);
  detail::add_check(rep, "psd", min_eig, -1e-10, false, "min eigenvalue of rho " + over);
  detail::add_check(rep, "parity_pattern", parity, 1e-12, true, "max even/odd sector entry " + over);
  detail::add_check(rep, "no_go_pairwise", pairwise, 1e-10, true, "max pairwise negativity " + over);
  detail::add_check(rep, "ghz_extraction_observed", max_pi, 1e-6, false, "max pi-tangle " + over);
  detail::add_check(rep, "correlator_cross_check", cross, 1e-8, true,
                    "max |closed form - quadrature| over all correlators " + over);

  // Closed-form elements against the full sum.
  double elem = 0.0;
  for (int i = 0; i < opt.correlator_sets; ++i) {
    const auto& cfg = scenarios[static_cast<std::size_t>(i) % scenarios.size()];
    const auto corr = random_correlators(rng);
    const auto rho = assemble_rho_sum_unchecked(detail::excitation_phases(cfg), corr);
    for (auto [r, c] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{1, 5}}) {
      elem = std::max(elem, std::abs(element_closed_form(r, c, corr, cfg) - rho(r - 1, c - 1)));
    }
  }
  detail::add_check(rep, "sum_vs_closed_form", elem, 1e-10, true,
                    "max |r11, r22, r15 - sum| over " + std::to_string(opt.correlator_sets) + " random correlator sets");

  // Invariances of entanglement measures and spectra.
  double gap_diff = 0.0, trans_diff = 0.0, relabel_diff = 0.0, perm_diff = 0.0;
  std::uniform_real_distribution<double> shift(-5.0, 5.0), gap(0.0, 5.0);
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& cfg = scenarios[i];
    auto corr = correlators_for(cfg, {false, 0.0});
    if (opt.flip_theta_ab) corr.theta[0] = -corr.theta[0];

    ScenarioConfig g = cfg;
    for (auto& d : g.detectors) d.gap = gap(rng);
    const auto rho_g = assemble_rho_sum_unchecked(detail::excitation_phases(g), corr);
    gap_diff = std::max(gap_diff, detail::report_diff(pi_tangle(rho_g), reports[i]));
    const auto s0 = detail::spectra(states[i]), s1 = detail::spectra(rho_g);
    for (std::size_t k = 0; k < s0.size(); ++k) gap_diff = std::max(gap_diff, detail::spectrum_diff(s0[k], s1[k]));

    const ScenarioConfig t = detail::translated(cfg, {shift(rng), shift(rng), shift(rng)}, shift(rng));
    auto corr_t = correlators_for(t, {false, 0.0});
    if (opt.flip_theta_ab) corr_t.theta[0] = -corr_t.theta[0];
    const auto rho_t = assemble_rho_sum_unchecked(detail::excitation_phases(t), corr_t);
    trans_diff = std::max(trans_diff, detail::report_diff(pi_tangle(rho_t), reports[i]));

    // Relabel: shuffle the user labels; the report must permute along.
    std::array<Label, 3> labels{Label::A, Label::B, Label::C};
    std::shuffle(labels.begin(), labels.end(), rng);
    std::array<DetectorSpec, 3> raw = cfg.detectors;
    for (std::size_t k = 0; k < 3; ++k) raw[k].label = labels[k];
    const ScenarioConfig rl = validate_and_order(raw, cfg.tolerances);
    auto corr_rl = correlators_for(rl, {false, 0.0});
    if (opt.flip_theta_ab) corr_rl.theta[0] = -corr_rl.theta[0];
    const auto rep_rl = pi_tangle(assemble_rho_sum_unchecked(detail::excitation_phases(rl), corr_rl));
    const auto user0 = to_user_order(reports[i], cfg);
    const auto user1 = to_user_order(rep_rl, rl);
    EntanglementReport expected;
    for (std::size_t k = 0; k < 3; ++k) {
      const auto old_label = static_cast<std::size_t>(cfg.user_label(static_cast<int>(k)));
      const auto new_label = static_cast<std::size_t>(labels[k]);
      expected.one_vs_rest[new_label] = user0.one_vs_rest[old_label];
      expected.pi_components[new_label] = user0.pi_components[old_label];
    }
    for (std::size_t p = 0; p < 3; ++p) {
      const int a = static_cast<int>(labels[static_cast<std::size_t>(kPairs[p][0])]);
      const int b = static_cast<int>(labels[static_cast<std::size_t>(kPairs[p][1])]);
      expected.pairwise[static_cast<std::size_t>(pair_index(a, b))] = user0.pairwise[p];
    }
    expected.pi_tangle = user0.pi_tangle;
    relabel_diff = std::max(relabel_diff, detail::report_diff(expected, user1));

    // Qubit permutation: at equal switching times the slot order is arbitrary,
    // and reordering the detectors conjugates rho by the matching permutation.
    ScenarioConfig eq = cfg;
    for (auto& d : eq.detectors) d.switch_time = cfg[0].switch_time;
    std::array<int, 3> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::array<DetectorSpec, 3> reordered;
    for (std::size_t k = 0; k < 3; ++k) reordered[static_cast<std::size_t>(perm[k])] = eq.detectors[k];
    const ScenarioConfig eq_sorted = validate_and_order(eq.detectors, eq.tolerances);
    const ScenarioConfig eq_perm = validate_and_order(reordered, eq.tolerances);
    const auto rho_a = assemble_rho_sum_unchecked(detail::excitation_phases(eq_sorted), correlators_for(eq_sorted, {false, 0.0}));
    const auto rho_b = assemble_rho_sum_unchecked(detail::excitation_phases(eq_perm), correlators_for(eq_perm, {false, 0.0}));
    perm_diff = std::max(perm_diff, (permute_qubits(rho_a.tensor(), perm) - rho_b.tensor()).cwiseAbs().maxCoeff());
  }
  detail::add_check(rep, "gap_invariance", gap_diff, 1e-10, true,
                    "max change of measures and spectra under random gaps " + over);
  detail::add_check(rep, "translation_invariance", trans_diff, 1e-10, true,
                    "max change of measures under spacetime translation " + over);
  detail::add_check(rep, "relabel_covariance", relabel_diff, 1e-10, true,
                    "max mismatch of permuted report under relabeling " + over);
  detail::add_check(rep, "qubit_permutation_covariance", perm_diff, 1e-12, true,
                    "max |P rho P^dagger - rho'| for equal-time reorderings " + over);

  // Correlator properties on random pairs.
  double eq_theta = 0.0, sym = 0.0, bilinear = 0.0, decay = 0.0, coincidence = 0.0, f_diff = 0.0;
  for (int i = 0; i < opt.scenarios; ++i) {
    DetectorSpec D, E;
    D.label = Label::A;
    E.label = Label::B;
    D.coupling = 12.0 * unit(rng);
    E.coupling = 12.0 * unit(rng);
    D.smearing_width = 0.5 + 1.5 * unit(rng);
    E.smearing_width = 0.5 + 1.5 * unit(rng);
    E.position = {3.0 * unit(rng), 3.0 * unit(rng), 3.0 * unit(rng)};
    E.switch_time = D.switch_time;
    eq_theta = std::max(eq_theta, std::fabs(compute_theta(D, E, CorrelatorMethod::quadrature).value));
    E.switch_time = 3.0 * unit(rng);

    sym = std::max({sym, std::fabs(compute_theta(D, E).value + compute_theta(E, D).value),
                    std::fabs(compute_omega(D, E).value - compute_omega(E, D).value)});

    DetectorSpec D2 = D;
    D2.coupling *= 2.0;
    const double t1 = compute_theta(D, E).value, t2 = compute_theta(D2, E).value;
    const double w1 = compute_omega(D, E).value, w2 = compute_omega(D2, E).value;
    bilinear = std::max({bilinear, std::fabs(t2 - 2.0 * t1), std::fabs(w2 - 2.0 * w1)});
    bilinear = std::max(bilinear, std::fabs(compute_log_f(D2) - 4.0 * compute_log_f(D)));

    // Theta from d = dT to d = dT + 10 sigma, same widths.
    DetectorSpec P = D, Q = E;
    Q.smearing_width = P.smearing_width;
    Q.coupling = P.coupling = 1.0;
    const double dT = 0.5 + 2.5 * unit(rng);
    Q.switch_time = P.switch_time + dT;
    Q.position = {dT, 0.0, 0.0};
    const double near = std::fabs(compute_theta(P, Q).value);
    Q.position = {dT + 10.0 * P.smearing_width, 0.0, 0.0};
    const double far = std::fabs(compute_theta(P, Q).value);
    decay = std::max(decay, far / near);

    // Coincident detectors: omega_DD = 2 ln f_D.
    DetectorSpec C = D;
    C.label = Label::C;
    coincidence = std::max(coincidence, std::fabs(compute_omega(D, C).value - 2.0 * compute_log_f(D)) /
                                            std::max(1.0, std::fabs(compute_log_f(D))));
    f_diff = std::max(f_diff, std::fabs(compute_f_quadrature(D).value - compute_f(D)));
  }
  const std::string pairs = "over " + std::to_string(opt.scenarios) + " random detector pairs";
  detail::add_check(rep, "equal_time_theta", eq_theta, 1e-10, true, "max |Theta| at equal switching times " + pairs);
  detail::add_check(rep, "correlator_symmetry", sym, 1e-12, true, "max |Theta_DE + Theta_ED|, |omega_DE - omega_ED| " + pairs);
  detail::add_check(rep, "bilinear_scaling", bilinear, 1e-10, true, "max deviation from bilinear coupling scaling " + pairs);
  detail::add_check(rep, "theta_causal_decay", decay, 1e-3, true, "max |Theta(dT + 10 sigma)| / |Theta(dT)| " + pairs);
  detail::add_check(rep, "omega_coincidence", coincidence, 1e-12, true, "max |omega_DD - 2 ln f_D| (relative) " + pairs);
  detail::add_check(rep, "f_closed_vs_quadrature", f_diff, 1e-10, true, "max |f quadrature - f closed form| " + pairs);
  return rep;
}

inline void write_validation_text(std::ostream& os, const ValidationReport& r) {
  os << "seed " << r.seed << "\n";
  for (const auto& c : r.checks) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-30s %s  observed %.3e %s %.3e", c.name.c_str(), c.passed ? "PASS" : "FAIL",
                  c.observed, c.upper_bound ? "<=" : ">=", c.tolerance);
    os << buf << "  (" << c.detail << ")\n";
  }
  os << (r.all_passed() ? "all checks passed" : "some checks FAILED") << "\n";
}

}  // namespace udw
