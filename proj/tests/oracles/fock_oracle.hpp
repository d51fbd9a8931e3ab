#pragma once

// Direct simulation of three delta-switched qubits coupled to a few
// truncated bosonic modes.
//
// Detector D couples through the anti-Hermitian field operator
//   Y_D = sum_m (beta_Dm a_m^dagger - conj(beta_Dm) a_m),
// so e^{Y_D} is a displacement, and the joint evolution is
//   U = e^{mu_C Y_C} e^{mu_B Y_B} e^{mu_A Y_A},
//   e^{mu Y} = 1 cosh(Y) + mu sinh(Y),
//   mu_D = e^{i Omega_D T_D} |1><0| + e^{-i Omega_D T_D} |0><1|.
// The qubit state is the field trace of U |000>|vac>. Nothing here uses the
// closed-form sum over sign indices.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;

struct FockModel {
  int modes = 2;
  int cutoff = 30;                                   // Fock states 0..cutoff-1 per mode
  std::array<std::vector<cplx>, 3> beta;             // per detector, one amplitude per mode
  std::array<double, 3> phase{0.0, 0.0, 0.0};        // Omega_D T_D
};

// Three-qubit state in binary order (A most significant) from the field trace.
inline Eigen::Matrix<cplx, 8, 8> simulate(const FockModel& m) {
  const int dim = static_cast<int>(std::pow(m.cutoff, m.modes));
  auto occupation = [&](int idx, int mode) {
    for (int k = 0; k < mode; ++k) idx /= m.cutoff;
    return idx % m.cutoff;
  };
  auto stride = [&](int mode) {
    int s = 1;
    for (int k = 0; k < mode; ++k) s *= m.cutoff;
    return s;
  };
  using Vec = std::vector<cplx>;
  // y = Y_D v
  auto apply_y = [&](int det, const Vec& v) {
    Vec out(static_cast<std::size_t>(dim), 0.0);
    for (int i = 0; i < dim; ++i) {
      if (v[static_cast<std::size_t>(i)] == 0.0) continue;
      for (int mode = 0; mode < m.modes; ++mode) {
        const cplx b = m.beta[static_cast<std::size_t>(det)][static_cast<std::size_t>(mode)];
        const int n = occupation(i, mode);
        if (n + 1 < m.cutoff) out[static_cast<std::size_t>(i + stride(mode))] += b * std::sqrt(n + 1.0) * v[static_cast<std::size_t>(i)];
        if (n > 0) out[static_cast<std::size_t>(i - stride(mode))] -= std::conj(b) * std::sqrt(static_cast<double>(n)) * v[static_cast<std::size_t>(i)];
      }
    }
    return out;
  };
  // (cosh Y v, sinh Y v) by Taylor series
  auto cosh_sinh = [&](int det, const Vec& v) {
    Vec c = v, s(static_cast<std::size_t>(dim), 0.0), term = v;
    for (int k = 1; k < 200; ++k) {
      term = apply_y(det, term);
      double norm = 0.0;
      for (auto& x : term) {
        x /= static_cast<double>(k);
        norm += std::norm(x);
      }
      Vec& target = k % 2 ? s : c;
      for (int i = 0; i < dim; ++i) target[static_cast<std::size_t>(i)] += term[static_cast<std::size_t>(i)];
      if (norm < 1e-40) break;
    }
    return std::pair{c, s};
  };

  // psi[q] is the field vector attached to qubit basis state q.
  std::array<Vec, 8> psi;
  for (auto& p : psi) p.assign(static_cast<std::size_t>(dim), 0.0);
  psi[0][0] = 1.0;
  for (int det = 0; det < 3; ++det) {
    const int mask = 1 << (2 - det);
    const cplx raise = std::exp(cplx(0.0, m.phase[static_cast<std::size_t>(det)]));
    std::array<Vec, 8> next;
    for (auto& p : next) p.assign(static_cast<std::size_t>(dim), 0.0);
    for (int q = 0; q < 8; ++q) {
      bool nonzero = false;
      for (const auto& x : psi[static_cast<std::size_t>(q)]) nonzero = nonzero || x != 0.0;
      if (!nonzero) continue;
      const auto [c, s] = cosh_sinh(det, psi[static_cast<std::size_t>(q)]);
      const int flipped = q ^ mask;
      const cplx amp = (q & mask) ? std::conj(raise) : raise;
      for (int i = 0; i < dim; ++i) {
        next[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] += c[static_cast<std::size_t>(i)];
        next[static_cast<std::size_t>(flipped)][static_cast<std::size_t>(i)] += amp * s[static_cast<std::size_t>(i)];
      }
    }
    psi = next;
  }
  Eigen::Matrix<cplx, 8, 8> rho;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k < dim; ++k) acc += psi[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] * std::conj(psi[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]);
      rho(i, j) = acc;
    }
  return rho;
}

// <beta_D, beta_E> = sum_m conj(beta_Dm) beta_Em
inline cplx overlap(const FockModel& m, int d, int e) {
  cplx s = 0.0;
  for (int k = 0; k < m.modes; ++k)
    s += std::conj(m.beta[static_cast<std::size_t>(d)][static_cast<std::size_t>(k)]) * m.beta[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
  return s;
}

}  // namespace oracle
