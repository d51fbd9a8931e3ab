#pragma once

// Vacuum correlators of the smeared, delta-switched field operators.
//
// For detector D the mode function is
//   beta_D(k) = -i lambda_D / (2 sqrt(2|k|)) Ftilde_D(k) exp(i(|k| T_D - k.x_D)),
// and the density matrix needs
//   f_D       = exp(-1/2 int d^3k |beta_D|^2)
//   Theta_D,E = i int d^3k (beta_D^* beta_E - beta_D beta_E^*) = -2 Im <beta_D, beta_E>
//   omega_D,E = -1/2 int d^3k (beta_D^* beta_E + c.c.)      = -Re <beta_D, beta_E>
// For Gaussian profiles Ftilde_D(k) = A_D exp(-sigma_D^2 k^2 / 2), the angular
// integral gives 4 pi sin(kd)/(kd), and
//   <beta_D, beta_E> = (pi lambda_D lambda_E A_D A_E / 2) (I_cos + i I_sin),
//   I_cos = int_0^inf dk k exp(-s k^2) cos(k dT) j0(k d),
//   I_sin = int_0^inf dk k exp(-s k^2) sin(k dT) j0(k d),
// with s = (sigma_D^2 + sigma_E^2)/2, d = |x_D - x_E| and dT = T_E - T_D.
// Closed forms:
//   I_sin = sqrt(pi/s) / (2d) exp(-(d^2 + dT^2)/(4s)) sinh(d dT / (2s))
//   I_cos = [F((d+dT)/(2 sqrt s)) + F((d-dT)/(2 sqrt s))] / (2 d sqrt s),  F = Dawson
//   int d^3k |beta_D|^2 = pi lambda_D^2 A_D^2 / (4 sigma_D^2).

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "udw/errors.hpp"
#include "udw/quadrature.hpp"
#include "udw/scenario.hpp"
#include "udw/special.hpp"

namespace udw {

// Pair slots in canonical order: AB, AC, BC.
inline constexpr std::array<std::array<int, 2>, 3> kPairs{{{0, 1}, {0, 2}, {1, 2}}};

inline int pair_index(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 0 && j == 1) return 0;
  if (i == 0 && j == 2) return 1;
  if (i == 1 && j == 2) return 2;
  throw std::out_of_range("pair_index: slots must be distinct and in {0,1,2}");
}

struct PairGeometry {
  double d = 0.0;        // |x_D - x_E|
  double delta_t = 0.0;  // T_E - T_D
  std::array<double, 2> couplings{0.0, 0.0};
  std::array<double, 2> widths{1.0, 1.0};
  std::array<double, 2> amplitudes{1.0, 1.0};  // Ftilde(0) of each profile

  double s() const { return 0.5 * (widths[0] * widths[0] + widths[1] * widths[1]); }
  double prefactor() const {
    return std::numbers::pi * couplings[0] * couplings[1] * amplitudes[0] * amplitudes[1];
  }
};

// Fourier transform of the Gaussian profile with (2 pi)^{-3/2} convention.
inline double fourier_smearing(double k, double sigma, SmearingNorm norm = SmearingNorm::peak) {
  const double amp = norm == SmearingNorm::peak ? sigma * sigma * sigma : std::pow(2.0 * std::numbers::pi, -1.5);
  return amp * std::exp(-0.5 * sigma * sigma * k * k);
}

inline double smearing_amplitude(const DetectorSpec& d) { return fourier_smearing(0.0, d.smearing_width, d.smearing_norm); }

inline PairGeometry pair_geometry(const DetectorSpec& D, const DetectorSpec& E) {
  PairGeometry g;
  g.d = distance(D.position, E.position);
  g.delta_t = E.switch_time - D.switch_time;
  g.couplings = {D.coupling * D.switching_strength, E.coupling * E.switching_strength};
  g.widths = {D.smearing_width, E.smearing_width};
  g.amplitudes = {smearing_amplitude(D), smearing_amplitude(E)};
  return g;
}

// int d^3k |beta_D(k)|^2
inline double beta_norm_sq(const DetectorSpec& D) {
  const double lam = D.coupling * D.switching_strength;
  const double a = smearing_amplitude(D);
  return std::numbers::pi * lam * lam * a * a / (4.0 * D.smearing_width * D.smearing_width);
}

inline double compute_log_f(const DetectorSpec& D) { return -0.5 * beta_norm_sq(D); }

inline double compute_f(const DetectorSpec& D) { return std::exp(compute_log_f(D)); }

namespace reduced {

// int_0^inf k exp(-s k^2) sin(k dT) j0(k d) dk
inline double sin_integral(double d, double dt, double s) {
  if (dt == 0.0) return 0.0;
  const double x = d * dt / (2.0 * s);
  if (std::fabs(x) < 20.0) {
    // sinh(x)/d = (dT / 2s) sinhc(x); finite as d -> 0
    return std::sqrt(std::numbers::pi / s) * 0.5 * std::exp(-(d * d + dt * dt) / (4.0 * s)) * (dt / (2.0 * s)) *
           special::sinhc(x);
  }
  const double em = std::exp(-(d - dt) * (d - dt) / (4.0 * s));
  const double ep = std::exp(-(d + dt) * (d + dt) / (4.0 * s));
  return std::sqrt(std::numbers::pi / s) / (4.0 * d) * (em - ep);
}

// int_0^inf k exp(-s k^2) cos(k dT) j0(k d) dk
inline double cos_integral(double d, double dt, double s) {
  const double rs = std::sqrt(s);
  const double x0 = dt / (2.0 * rs);
  const double h = d / (2.0 * rs);
  if (h < 1e-3) {
    // [F(x0 + h) - F(x0 - h)] / (2h), Taylor-expanded in h.
    const auto der = special::dawson_odd_derivatives(x0);
    return (der.d1 + h * h * der.d3 / 6.0 + h * h * h * h * der.d5 / 120.0) / (2.0 * s);
  }
  return (special::dawson(x0 + h) - special::dawson(x0 - h)) / (2.0 * d * rs);
}

inline double quad_frequency(double d, double dt) { return d + std::fabs(dt); }

inline quadrature::Result sin_integral_quadrature(double d, double dt, double s, double rel_tol) {
  auto f = [=](double k) { return k * std::exp(-s * k * k) * std::sin(k * dt) * special::sinc(k * d); };
  return quadrature::integrate_semi_infinite(f, rel_tol, std::sqrt(s), quad_frequency(d, dt));
}

inline quadrature::Result cos_integral_quadrature(double d, double dt, double s, double rel_tol) {
  auto f = [=](double k) { return k * std::exp(-s * k * k) * std::cos(k * dt) * special::sinc(k * d); };
  return quadrature::integrate_semi_infinite(f, rel_tol, std::sqrt(s), quad_frequency(d, dt));
}

// int_0^inf k exp(-sigma^2 k^2) dk, the radial part of int d^3k |beta|^2.
inline quadrature::Result norm_integral_quadrature(double sigma, double rel_tol) {
  auto f = [=](double k) { return k * std::exp(-sigma * sigma * k * k); };
  return quadrature::integrate_semi_infinite(f, rel_tol, sigma, 0.0);
}

}  // namespace reduced

enum class CorrelatorMethod { closed_form, quadrature };

struct ScalarEstimate {
  double value = 0.0;
  double err = 0.0;
};

inline ScalarEstimate compute_theta(const DetectorSpec& D, const DetectorSpec& E,
                                    CorrelatorMethod method = CorrelatorMethod::closed_form, double rel_tol = 1e-10) {
  const auto g = pair_geometry(D, E);
  const double pre = g.prefactor();
  if (pre == 0.0) return {0.0, 0.0};
  if (method == CorrelatorMethod::closed_form) return {-pre * reduced::sin_integral(g.d, g.delta_t, g.s()), 0.0};
  const auto q = reduced::sin_integral_quadrature(g.d, g.delta_t, g.s(), rel_tol);
  return {-pre * q.value, pre * q.err_est};
}

inline ScalarEstimate compute_omega(const DetectorSpec& D, const DetectorSpec& E,
                                    CorrelatorMethod method = CorrelatorMethod::closed_form, double rel_tol = 1e-10) {
  const auto g = pair_geometry(D, E);
  const double pre = 0.5 * g.prefactor();
  if (pre == 0.0) return {0.0, 0.0};
  if (method == CorrelatorMethod::closed_form) return {-pre * reduced::cos_integral(g.d, g.delta_t, g.s()), 0.0};
  const auto q = reduced::cos_integral_quadrature(g.d, g.delta_t, g.s(), rel_tol);
  return {-pre * q.value, pre * q.err_est};
}

inline ScalarEstimate compute_f_quadrature(const DetectorSpec& D, double rel_tol = 1e-10) {
  const double lam = D.coupling * D.switching_strength;
  const double a = smearing_amplitude(D);
  const double pre = std::numbers::pi * lam * lam * a * a / 2.0;
  const auto q = reduced::norm_integral_quadrature(D.smearing_width, rel_tol);
  const double f = std::exp(-0.5 * pre * q.value);
  return {f, 0.5 * pre * q.err_est * f};
}

// The nine scalars feeding the density matrix, for detectors in canonical slots.
struct CorrelatorSet {
  std::array<double, 3> log_f{0.0, 0.0, 0.0};
  std::array<double, 3> theta{0.0, 0.0, 0.0};  // AB, AC, BC
  std::array<double, 3> omega{0.0, 0.0, 0.0};  // AB, AC, BC
  double err = 0.0;                            // worst quadrature error estimate
  double cross_check_diff = 0.0;               // worst |closed form - quadrature|

  double f(int slot) const { return std::exp(log_f[static_cast<std::size_t>(slot)]); }
  double theta_of(int i, int j) const {
    const double t = theta[static_cast<std::size_t>(pair_index(i, j))];
    return i < j ? t : -t;
  }
  double omega_of(int i, int j) const { return omega[static_cast<std::size_t>(pair_index(i, j))]; }
};

struct CorrelatorOptions {
  bool cross_check = true;
  double cross_check_tol = 1e-8;
};

inline CorrelatorSet correlators_for(const ScenarioConfig& cfg, const CorrelatorOptions& opt = {}) {
  CorrelatorSet out;
  const double rel_tol = cfg.tolerances.quadrature;
  for (int i = 0; i < 3; ++i) {
    out.log_f[static_cast<std::size_t>(i)] = compute_log_f(cfg[i]);
    if (opt.cross_check) {
      const auto q = compute_f_quadrature(cfg[i], rel_tol);
      const double diff = std::fabs(q.value - std::exp(out.log_f[static_cast<std::size_t>(i)]));
      out.err = std::max(out.err, q.err);
      out.cross_check_diff = std::max(out.cross_check_diff, diff);
      if (diff > opt.cross_check_tol) {
        throw CrossCheckError(std::string("f_") + to_char(cfg.user_label(i)) + ": closed form and quadrature differ by " +
                              std::to_string(diff));
      }
    }
  }
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& D = cfg[kPairs[p][0]];
    const auto& E = cfg[kPairs[p][1]];
    out.theta[p] = compute_theta(D, E).value;
    out.omega[p] = compute_omega(D, E).value;
    if (opt.cross_check) {
      const auto tq = compute_theta(D, E, CorrelatorMethod::quadrature, rel_tol);
      const auto oq = compute_omega(D, E, CorrelatorMethod::quadrature, rel_tol);
      out.err = std::max({out.err, tq.err, oq.err});
      const double dt = std::fabs(tq.value - out.theta[p]);
      const double dw = std::fabs(oq.value - out.omega[p]);
      out.cross_check_diff = std::max({out.cross_check_diff, dt, dw});
      const std::string pair = std::string{to_char(D.label), to_char(E.label)};
      if (dt > opt.cross_check_tol) {
        throw CrossCheckError("Theta_" + pair + ": closed form and quadrature differ by " + std::to_string(dt));
      }
      if (dw > opt.cross_check_tol) {
        throw CrossCheckError("omega_" + pair + ": closed form and quadrature differ by " + std::to_string(dw));
      }
    }
  }
  return out;
}

}  // namespace udw
