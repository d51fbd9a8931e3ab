// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run every criterion
//   acceptance --criterion N   run criterion N only (1..9)
//
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/monte_carlo.hpp"
#include "udw/cli.hpp"
#include "udw/udw.hpp"

using namespace udw;

namespace {

struct Outcome {
  bool passed = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) passed = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Scenario with lambda in [0,12], lengths and times in [0,3], sigma in [0.5,2].
ScenarioConfig physical_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.0, 3.0), lam(0.0, 12.0), sig(0.5, 2.0), gap(0.1, 3.0), coin(0.0, 1.0);
  ScenarioParams p;
  p.kind = coin(rng) < 0.5 ? Configuration::triangle : Configuration::line;
  p.L = len(rng);
  p.L_AB = len(rng);
  p.L_AC = len(rng);
  p.T = 0.5 * len(rng);
  if (coin(rng) < 0.5) {
    p.T_A = len(rng);
    p.T_B = len(rng);
    p.T_C = len(rng);
  }
  p.lambda = lam(rng);
  p.sigma = sig(rng);
  p.Omega = gap(rng);
  return build_configuration(p);
}

// ---------------------------------------------------------------------------

Outcome criterion_1_and_2(int which) {
  Outcome o;
  std::mt19937_64 rng(1001);
  double herm = 0.0, trace = 0.0, min_eig = 0.0, parity = 0.0, worst_pair = 0.0, max_pi = 0.0;
  int with_pi = 0;
  const int n = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < n; ++i) {
    const auto cfg = physical_scenario(rng);
    const auto corr = correlators_for(cfg);
    const auto rho = assemble_rho_sum_unchecked(detail::excitation_phases(cfg), corr);
    const auto d = diagnose_state(rho);
    herm = std::max(herm, d.hermiticity);
    trace = std::max(trace, d.trace_error);
    min_eig = std::min(min_eig, d.min_eigenvalue);
    parity = std::max(parity, d.parity_leak);
    if (which == 2) {
      const auto r = pi_tangle(rho);
      for (double x : r.pairwise) worst_pair = std::max(worst_pair, x);
      max_pi = std::max(max_pi, r.pi_tangle);
      if (r.pi_tangle > 1e-6) ++with_pi;
    }
  }
  const double elapsed = seconds_since(t0);
  if (which == 1) {
    o.require(herm <= 1e-12, "hermiticity max " + sci(herm) + " <= 1e-12 over " + std::to_string(n) + " scenarios");
    o.require(trace <= 1e-10, "trace error max " + sci(trace) + " <= 1e-10");
    o.require(min_eig >= -1e-10, "min eigenvalue " + sci(min_eig) + " >= -1e-10");
    o.require(parity <= 1e-12, "parity-sector leak max " + sci(parity) + " <= 1e-12");
    o.require(elapsed < 60.0, "runtime " + sci(elapsed) + " s < 60 s");
  } else {
    o.require(worst_pair <= 1e-10, "pairwise negativity max " + sci(worst_pair) + " <= 1e-10");
    o.require(with_pi > 0, std::to_string(with_pi) + " scenarios with pi > 1e-6 (max " + sci(max_pi) + ")");
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  std::mt19937_64 rng(3003);
  std::uniform_real_distribution<double> f(0.05, 1.0), t(-0.3, 0.3), w(-0.3, 0.3), ph(0.0, 3.0), len(0.0, 3.0);
  double worst = 0.0;
  const int n = 1000;
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < n; ++i) {
    CorrelatorSet c;
    for (auto& x : c.log_f) x = std::log(f(rng));
    for (auto& x : c.theta) x = t(rng);
    for (auto& x : c.omega) x = w(rng);
    ScenarioParams p;
    p.T_A = len(rng);
    p.T_B = *p.T_A + len(rng);
    p.T_C = *p.T_B + len(rng);
    p.Omega = ph(rng);
    const auto cfg = build_configuration(p);
    const auto rho = assemble_rho_sum_unchecked(detail::excitation_phases(cfg), c);
    for (auto [r, k] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{1, 5}}) {
      worst = std::max(worst, std::abs(rho(r - 1, k - 1) - element_closed_form(r, k, c, cfg)));
    }
  }
  const double elapsed = seconds_since(t0);
  o.require(worst <= 1e-10, "max |sum - closed form| over r11, r22, r15 = " + sci(worst) + " <= 1e-10 on " +
                                std::to_string(n) + " correlator sets");
  o.require(elapsed < 10.0, "runtime " + sci(elapsed) + " s < 10 s");
  return o;
}

Outcome criterion_4() {
  Outcome o;
  // f: quadrature against closed form
  double worst_f = 0.0;
  for (double sigma : {0.5, 0.8, 1.0, 1.5, 2.0})
    for (double lam : {0.5, 2.0, 5.0, 10.0, 12.0})
      for (auto norm : {SmearingNorm::unit, SmearingNorm::peak}) {
        DetectorSpec d;
        d.coupling = lam;
        d.smearing_width = sigma;
        d.smearing_norm = norm;
        worst_f = std::max(worst_f, std::fabs(compute_f_quadrature(d).value - compute_f(d)));
      }
  o.require(worst_f <= 1e-10, "max |f_quadrature - f_closed| = " + sci(worst_f) + " <= 1e-10");

  // Theta at equal times for all separations
  double worst_eq = 0.0;
  for (int i = 0; i <= 200; ++i) {
    DetectorSpec a, b;
    a.coupling = b.coupling = 10.0;
    b.position = {0.05 * i, 0.0, 0.0};
    a.switch_time = b.switch_time = 0.7;
    worst_eq = std::max(worst_eq, std::fabs(compute_theta(a, b, CorrelatorMethod::quadrature).value));
    worst_eq = std::max(worst_eq, std::fabs(compute_theta(a, b, CorrelatorMethod::closed_form).value));
  }
  o.require(worst_eq <= 1e-10, "max |Theta(dT=0)| over d in [0,10] = " + sci(worst_eq) + " <= 1e-10");

  // Reduced 1D quadrature against the unreduced 3D Monte Carlo integral
  struct Point {
    double d, dt, sa, sb;
  };
  const std::vector<Point> points{{0.0, 0.5, 1.0, 1.0},  {0.4, 0.25, 1.0, 1.0}, {0.4, 0.5, 1.0, 1.0},
                                  {1.0, 1.0, 1.0, 1.0},  {1.0, 0.3, 0.7, 1.3}, {2.0, 2.2, 1.0, 1.0},
                                  {0.5, 1.5, 0.5, 0.5},  {1.5, 0.0, 1.0, 2.0}, {0.2, 2.0, 1.5, 1.5},
                                  {2.8, 1.4, 1.0, 1.0},  {3.0, 3.0, 2.0, 0.5}, {0.8, 0.8, 0.6, 0.9}};
  const long long samples = 100'000'000;
  double worst_sigma = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    DetectorSpec a, b;
    a.coupling = 4.0;
    b.coupling = 6.0;
    a.smearing_width = p.sa;
    b.smearing_width = p.sb;
    b.position = {p.d / std::sqrt(3.0), p.d / std::sqrt(3.0), p.d / std::sqrt(3.0)};
    b.switch_time = p.dt;
    const double theta = compute_theta(a, b, CorrelatorMethod::quadrature).value;
    const double omega = compute_omega(a, b, CorrelatorMethod::quadrature).value;
    const oracle::McDetector ma{a.position, a.switch_time, a.coupling, a.smearing_width, smearing_amplitude(a)};
    const oracle::McDetector mb{b.position, b.switch_time, b.coupling, b.smearing_width, smearing_amplitude(b)};
    const auto est = oracle::mc_overlap(ma, mb, samples, 4000 + i);
    const double theta_mc = -2.0 * est.mean.imag(), se_theta = 2.0 * est.se_im;
    const double omega_mc = -est.mean.real(), se_omega = est.se_re;
    const double zt = std::fabs(theta - theta_mc) / std::max(se_theta, 1e-300);
    const double zw = std::fabs(omega - omega_mc) / std::max(se_omega, 1e-300);
    worst_sigma = std::max({worst_sigma, zt, zw});
    std::ostringstream os;
    os << "d=" << p.d << " dT=" << p.dt << " sigma=" << p.sa << "," << p.sb << ": Theta " << sci(theta) << " vs "
       << sci(theta_mc) << " (" << sci(zt) << " SE), omega " << sci(omega) << " vs " << sci(omega_mc) << " ("
       << sci(zw) << " SE)";
    o.require(zt <= 3.0 && zw <= 3.0, os.str());
  }
  o.notes.push_back("info Monte Carlo: " + std::to_string(points.size()) + " points x 1e8 samples in " +
                    sci(seconds_since(t0)) + " s, worst deviation " + sci(worst_sigma) + " SE");
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const auto spec = preset("fig3");
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = run_sweep(spec);
  const double elapsed = seconds_since(t0);
  double asym = 0.0, nc = 0.0;
  int positive = 0, failed = 0;
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : rows) {
    const auto& r = row.results[0];
    if (!r.ok) {
      ++failed;
      continue;
    }
    const auto& n = r.report.one_vs_rest;
    asym = std::max(asym, std::fabs(n[0] - n[1]));
    nc = std::max(nc, n[2]);
    if (n[0] > 1e-10 && n[1] > 1e-10) {
      ++positive;
      lo = std::min(lo, row.axis_values[0]);
      hi = std::max(hi, row.axis_values[0]);
    }
  }
  o.require(failed == 0, std::to_string(failed) + " failed points out of " + std::to_string(rows.size()));
  o.require(asym <= 1e-8, "max |N_A(BC) - N_B(AC)| = " + sci(asym) + " <= 1e-8");
  o.require(positive > 0, "N_A(BC), N_B(AC) > 0 at " + std::to_string(positive) + " points, L in [" + sci(lo) + ", " +
                              sci(hi) + "]");
  o.require(nc <= 1e-10, "max N_C(AB) = " + sci(nc) + " <= 1e-10");
  o.require(elapsed < 30.0, "runtime " + sci(elapsed) + " s < 30 s at " + std::to_string(rows.size()) + " points");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto spec = preset("fig4");
  const auto& tri = spec.variants[0].params;

  // (a) least-squares slope of log pi against log lambda on log-spaced points
  std::vector<double> xs, ys;
  for (int i = 0; i < 21; ++i) {
    const double lam = std::pow(10.0, -1.0 + i / 20.0);
    xs.push_back(std::log(lam));
    ys.push_back(std::log(pi_at_lambda(tri, lam)));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  o.require(std::fabs(slope - 4.0) <= 0.1, "log-log slope on [0.1, 1] = " + sci(slope) + " within 4 +- 0.1");

  // (b) single interior maximum and a decaying tail. Values below the 1e-12
  // zero threshold are roundoff (|pi| ~ 1e-30) and count as 0.
  const auto rows = run_sweep(spec);
  std::vector<double> lam, pt, pl;
  for (const auto& row : rows) {
    lam.push_back(row.axis_values[0]);
    pt.push_back(row.results[0].pi);
    pl.push_back(row.results[1].pi);
  }
  for (const auto* curve : {&pt, &pl}) {
    const auto& y = *curve;
    const std::string name = curve == &pt ? "triangle" : "line";
    int maxima = 0;
    for (std::size_t i = 1; i + 1 < y.size(); ++i)
      if (y[i] > y[i - 1] && y[i] >= y[i + 1]) ++maxima;
    const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const bool interior = peak > 0 && peak + 1 < y.size();
    bool monotone_tail = true;
    for (std::size_t i = peak + 1; i < y.size(); ++i)
      if (y[i] > y[i - 1]) monotone_tail = false;
    const double tail_ratio = y.back() / y[peak];
    std::size_t vanish = peak;
    while (vanish < y.size() && y[vanish] > 0.0) ++vanish;
    if (vanish < y.size())
      o.notes.push_back("info " + name + ": pi below 1e-12 from lambda = " + sci(lam[vanish]) + " on");
    o.require(maxima == 1 && interior,
              name + ": " + std::to_string(maxima) + " local maximum, lambda* ~ " + sci(lam[peak]) + " interior");
    o.require(monotone_tail && tail_ratio <= 1e-3,
              name + ": decreasing beyond lambda*, pi(30)/pi* = " + sci(tail_ratio) + " <= 1e-3");
  }

  // (c) line dominates wherever either is non-negligible
  int violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    if (std::max(pt[i], pl[i]) <= 1e-12) continue;
    if (pl[i] < pt[i]) {
      ++violations;
      worst = std::max(worst, pt[i] - pl[i]);
    }
  }
  o.require(violations == 0, "pi_line >= pi_triangle: " + std::to_string(violations) + " violations (worst " +
                                 sci(worst) + ")");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "runtime " + sci(elapsed) + " s < 60 s");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto spec = preset("fig5");
  const double L_AB = spec.variants[0].params.L_AB;
  const double sigma = spec.variants[0].params.sigma;
  const auto rows = run_sweep(spec);
  int positive = 0, outside = 0;
  double best = -1.0, bT = 0.0, bL = 0.0;
  for (const auto& row : rows) {
    const double Tc = row.axis_values[0], Lac = row.axis_values[1], Lbc = L_AB - Lac;
    const double pi = row.results[0].ok ? row.results[0].report.pi_tangle : 0.0;
    if (pi > kZeroPiThreshold) {
      ++positive;
      if (!(Lac < Lbc)) ++outside;
    }
    if (pi > best) {
      best = pi;
      bT = Tc;
      bL = Lac;
    }
  }
  o.require(positive > 0 && outside == 0, "pi > 0 only where L_AC < L_BC: " + std::to_string(outside) + " of " +
                                              std::to_string(positive) + " positive points have L_AC >= L_BC");
  const double da = std::fabs(bL - bT), db = std::fabs((L_AB - bL) - bT);
  o.require(da <= 3.0 * sigma && db <= 3.0 * sigma,
            "argmax pi = " + sci(best) + " at T_C = " + sci(bT) + ", L_AC = " + sci(bL) + ": |L_AC - T_C| = " + sci(da) +
                ", |L_BC - T_C| = " + sci(db) + " within 3 sigma");

  const auto rev = run_sweep(preset("fig5-reversed"));
  double rev_max = 0.0;
  int rev_failed = 0;
  for (const auto& row : rev) {
    if (!row.results[0].ok) {
      ++rev_failed;
      continue;
    }
    rev_max = std::max(rev_max, row.results[0].report.pi_tangle);
  }
  o.require(rev_failed == 0 && rev_max <= 1e-12, "reversed (A first, B and C together): max pi = " + sci(rev_max) +
                                                     " <= 1e-12, " + std::to_string(rev_failed) + " failed points");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 300.0, "runtime " + sci(elapsed) + " s < 300 s for two 101x101 grids");
  return o;
}

// Largest difference between two user-keyed reports.
double report_gap(const EntanglementReport& a, const EntanglementReport& b) {
  double d = std::fabs(a.pi_tangle - b.pi_tangle);
  for (std::size_t i = 0; i < 3; ++i) {
    d = std::max({d, std::fabs(a.one_vs_rest[i] - b.one_vs_rest[i]), std::fabs(a.pairwise[i] - b.pairwise[i]),
                  std::fabs(a.pi_components[i] - b.pi_components[i])});
  }
  return d;
}

EntanglementReport user_report(const std::array<DetectorSpec, 3>& raw) {
  const auto cfg = validate_and_order(raw);
  return to_user_order(analyze(cfg).report, cfg);
}

Outcome criterion_8() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(8008);
  std::uniform_real_distribution<double> gap(0.05, 5.0), shift(-5.0, 5.0);
  double worst_gap = 0.0, worst_trans = 0.0, worst_label = 0.0;
  const int n = 300;
  for (int i = 0; i < n; ++i) {
    const auto cfg = physical_scenario(rng);
    std::array<DetectorSpec, 3> raw;
    for (int s = 0; s < 3; ++s) raw[static_cast<std::size_t>(cfg.source_index[static_cast<std::size_t>(s)])] = cfg[s];
    const auto base = user_report(raw);

    auto g = raw;
    for (auto& d : g) d.gap = gap(rng);
    worst_gap = std::max(worst_gap, report_gap(base, user_report(g)));

    auto t = raw;
    const double dx = shift(rng), dy = shift(rng), dz = shift(rng), dt = shift(rng);
    for (auto& d : t) {
      d.position = {d.position[0] + dx, d.position[1] + dy, d.position[2] + dz};
      d.switch_time += dt;
    }
    worst_trans = std::max(worst_trans, report_gap(base, user_report(t)));

    // Relabel: the detector called u is now called perm[u].
    std::array<int, 3> perm{0, 1, 2};
    std::shuffle(perm.begin(), perm.end(), rng);
    auto r = raw;
    for (int u = 0; u < 3; ++u) r[static_cast<std::size_t>(u)].label = static_cast<Label>(perm[static_cast<std::size_t>(u)]);
    const auto relabelled = user_report(r);
    EntanglementReport expected;
    expected.pi_tangle = base.pi_tangle;
    expected.pi_raw = base.pi_raw;
    for (int u = 0; u < 3; ++u) {
      const auto pu = static_cast<std::size_t>(perm[static_cast<std::size_t>(u)]);
      expected.one_vs_rest[pu] = base.one_vs_rest[static_cast<std::size_t>(u)];
      expected.pi_components[pu] = base.pi_components[static_cast<std::size_t>(u)];
      for (int v = u + 1; v < 3; ++v) {
        expected.pairwise[static_cast<std::size_t>(pair_index(perm[static_cast<std::size_t>(u)], perm[static_cast<std::size_t>(v)]))] =
            base.pairwise_of(u, v);
      }
    }
    worst_label = std::max(worst_label, report_gap(expected, relabelled));
  }
  const double elapsed = seconds_since(t0);
  o.require(worst_gap <= 1e-10, "gap changes: max measure difference " + sci(worst_gap) + " <= 1e-10");
  o.require(worst_trans <= 1e-10, "spacetime translations: max measure difference " + sci(worst_trans) + " <= 1e-10");
  o.require(worst_label <= 1e-10, "relabeling with permuted report: max difference " + sci(worst_label) + " <= 1e-10");
  o.require(elapsed < 30.0, "runtime " + sci(elapsed) + " s < 30 s on " + std::to_string(n) + " scenarios");
  return o;
}

Outcome criterion_9() {
  Outcome o;
  auto run = [](std::vector<std::string> args) {
    args.insert(args.begin(), "udwharvest");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
    return std::pair{code, out.str()};
  };
  const auto a = run({"sweep", "--preset", "fig2"});
  const auto b = run({"sweep", "--preset", "fig2"});
  const auto c = run({"sweep", "--preset", "fig2", "--threads", "3"});
  o.require(a.first == 0 && b.first == 0 && c.first == 0, "three fig2 sweeps exit 0");
  o.require(!a.second.empty() && a.second == b.second, "repeated runs byte-identical (" +
                                                           std::to_string(a.second.size()) + " bytes)");
  o.require(a.second == c.second, "byte-identical with a different thread count");
  return o;
}

const std::vector<std::pair<std::string, std::function<Outcome()>>>& criteria() {
  static const std::vector<std::pair<std::string, std::function<Outcome()>>> c{
      {"state validity", [] { return criterion_1_and_2(1); }},
      {"no-go reproduction", [] { return criterion_1_and_2(2); }},
      {"dual-assembly oracle", criterion_3},
      {"correlator oracle", criterion_4},
      {"distance sweep structure", criterion_5},
      {"coupling sweep structure", criterion_6},
      {"lightcone grid structure", criterion_7},
      {"invariance suite", criterion_8},
      {"determinism", criterion_9},
  };
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]\n";
      return 1;
    }
  }
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria().size()); ++i) selected.push_back(i);

  bool all = true;
  for (int n : selected) {
    if (n < 1 || n > static_cast<int>(criteria().size())) {
      std::cerr << "no criterion " << n << "\n";
      return 1;
    }
    const auto& [name, fn] = criteria()[static_cast<std::size_t>(n - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = fn();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    for (const auto& note : out.notes) std::cout << "    " << note << "\n";
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << n << " (" << name << ") in " << sci(seconds_since(t0))
              << " s\n"
              << std::flush;
    all = all && out.passed;
  }
  return all ? 0 : 1;
}
