#pragma once

// Final three-detector state after each detector couples once.
//
// Matrix entries are stored in the basis
//   |000>, |001>, |010>, |100>, |011>, |101>, |110>, |111>
// with qubit order (A, B, C) in canonical switching slots. `tensor()` gives
// the same operator in plain binary order (index = 4 nA + 2 nB + nC), which is
// what partial traces and transposes work on.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "udw/errors.hpp"
#include "udw/field_correlators.hpp"
#include "udw/scenario.hpp"

namespace udw {

using cplx = std::complex<double>;
using Matrix8c = Eigen::Matrix<cplx, 8, 8>;
using Matrix4c = Eigen::Matrix<cplx, 4, 4>;

// Binary occupation pattern (nA nB nC) of each stored basis index.
inline constexpr std::array<int, 8> kBasisPattern{0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};

inline constexpr int basis_index(int nA, int nB, int nC) {
  const int pattern = (nA << 2) | (nB << 1) | nC;
  for (int i = 0; i < 8; ++i) {
    if (kBasisPattern[static_cast<std::size_t>(i)] == pattern) return i;
  }
  return -1;
}

inline constexpr bool even_parity(int basis) {
  const int p = kBasisPattern[static_cast<std::size_t>(basis)];
  return (((p >> 2) & 1) + ((p >> 1) & 1) + (p & 1)) % 2 == 0;
}

class DensityMatrix8 {
 public:
  DensityMatrix8() : entries_(Matrix8c::Zero()) {}
  explicit DensityMatrix8(const Matrix8c& entries) : entries_(entries) {}

  static DensityMatrix8 from_tensor(const Matrix8c& t) {
    Matrix8c m;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) m(i, j) = t(kBasisPattern[static_cast<std::size_t>(i)], kBasisPattern[static_cast<std::size_t>(j)]);
    return DensityMatrix8(m);
  }

  const Matrix8c& entries() const { return entries_; }
  Matrix8c& entries() { return entries_; }
  cplx operator()(int i, int j) const { return entries_(i, j); }

  Matrix8c tensor() const {
    Matrix8c t;
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j) t(kBasisPattern[static_cast<std::size_t>(i)], kBasisPattern[static_cast<std::size_t>(j)]) = entries_(i, j);
    return t;
  }

 private:
  Matrix8c entries_;
};

struct StateDiagnostics {
  double hermiticity = 0.0;   // max |rho - rho^dagger|
  double trace_error = 0.0;   // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  double parity_leak = 0.0;   // max |entry| between even and odd excitation sectors

  bool ok(double herm_tol = 1e-12, double trace_tol = 1e-10, double psd_tol = 1e-10, double parity_tol = 1e-12) const {
    return hermiticity <= herm_tol && trace_error <= trace_tol && min_eigenvalue >= -psd_tol && parity_leak <= parity_tol;
  }
};

inline StateDiagnostics diagnose_state(const DensityMatrix8& rho) {
  StateDiagnostics d;
  const Matrix8c& m = rho.entries();
  d.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(m.trace() - cplx(1.0, 0.0));
  const Matrix8c herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix8c> es(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = es.eigenvalues().minCoeff();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (even_parity(i) != even_parity(j)) d.parity_leak = std::max(d.parity_leak, std::abs(m(i, j)));
  return d;
}

struct AssemblyOptions {
  bool check_invariants = true;
  double hermiticity_tol = 1e-12;
  double trace_tol = 1e-10;
  double psd_tol = 1e-10;
  double parity_tol = 1e-12;
};

namespace detail {

// Local phase exp(i Omega_D T_D) carried by an excited detector D.
inline std::array<double, 3> excitation_phases(const ScenarioConfig& cfg) {
  return {cfg[0].gap * cfg[0].switch_time, cfg[1].gap * cfg[1].switch_time, cfg[2].gap * cfg[2].switch_time};
}

inline int sgn_bit(int bit) { return bit ? -1 : +1; }

}  // namespace detail

// Direct evaluation of the twelve-index sum over a,b,c,j,k,l,q,r,s,x,y,z = +-1.
//
// The inner factor f_A^{(a+l)^2} f_B^{(b+k)^2} f_C^{(c+j)^2} exp(sum of omega terms)
// is formed as a single exponential of its logarithm, which equals
// -1/2 |(a+l) beta_A + (b+k) beta_B + (c+j) beta_C|^2 <= 0 for physical input,
// so large couplings neither overflow nor underflow to 0 * inf.
inline DensityMatrix8 assemble_rho_sum_unchecked(const std::array<double, 3>& phases, const CorrelatorSet& corr) {
  const double lfA = corr.log_f[0], lfB = corr.log_f[1], lfC = corr.log_f[2];
  const double tAB = corr.theta[0], tAC = corr.theta[1], tBC = corr.theta[2];
  const double wAB = corr.omega[0], wAC = corr.omega[1], wBC = corr.omega[2];
  auto pow_log = [](int u, double lf) { return u == 0 ? 0.0 : u * u * lf; };

  // Inner terms indexed by the bits of (a, b, c, j, k, l); bit set means -1.
  std::array<cplx, 64> inner;
  for (int m = 0; m < 64; ++m) {
    const int a = detail::sgn_bit(m & 32), b = detail::sgn_bit(m & 16), c = detail::sgn_bit(m & 8);
    const int j = detail::sgn_bit(m & 4), k = detail::sgn_bit(m & 2), l = detail::sgn_bit(m & 1);
    const int u = a + l, v = b + k, w = c + j;
    const double re = pow_log(u, lfA) + pow_log(v, lfB) + pow_log(w, lfC) + u * v * wAB + u * w * wAC + v * w * wBC;
    const double im = 0.5 * ((a - l) * v * tAB + (a - l) * w * tAC + (b - k) * w * tBC);
    inner[static_cast<std::size_t>(m)] = std::exp(re) * cplx(std::cos(im), std::sin(im));
  }

  Matrix8c rho = Matrix8c::Zero();
  for (int o = 0; o < 64; ++o) {
    const int x = detail::sgn_bit(o & 32), y = detail::sgn_bit(o & 16), z = detail::sgn_bit(o & 8);
    const int q = detail::sgn_bit(o & 4), r = detail::sgn_bit(o & 2), s = detail::sgn_bit(o & 1);
    cplx acc = 0.0;
    for (int m = 0; m < 64; ++m) {
      const int a = detail::sgn_bit(m & 32), b = detail::sgn_bit(m & 16), c = detail::sgn_bit(m & 8);
      const int j = detail::sgn_bit(m & 4), k = detail::sgn_bit(m & 2), l = detail::sgn_bit(m & 1);
      int sign = 1;
      if (a == 1) sign *= s;
      if (b == 1) sign *= r;
      if (c == 1) sign *= q;
      if (j == -1) sign *= x;
      if (k == -1) sign *= y;
      if (l == -1) sign *= z;
      acc += static_cast<double>(sign) * inner[static_cast<std::size_t>(m)];
    }
    const int ketA = (1 - z) / 2, ketB = (1 - y) / 2, ketC = (1 - x) / 2;
    const int braA = (1 - s) / 2, braB = (1 - r) / 2, braC = (1 - q) / 2;
    const double phase = (ketA - braA) * phases[0] + (ketB - braB) * phases[1] + (ketC - braC) * phases[2];
    rho(basis_index(ketA, ketB, ketC), basis_index(braA, braB, braC)) +=
        cplx(std::cos(phase), std::sin(phase)) * acc / 64.0;
  }
  return DensityMatrix8(rho);
}

inline void require_valid_state(const DensityMatrix8& rho, const AssemblyOptions& opt) {
  const auto d = diagnose_state(rho);
  std::string worst;
  if (d.hermiticity > opt.hermiticity_tol) worst = "hermiticity violation " + std::to_string(d.hermiticity);
  else if (d.trace_error > opt.trace_tol) worst = "trace deviation " + std::to_string(d.trace_error);
  else if (d.min_eigenvalue < -opt.psd_tol) worst = "negative eigenvalue " + std::to_string(d.min_eigenvalue);
  else if (d.parity_leak > opt.parity_tol) worst = "parity-sector leak " + std::to_string(d.parity_leak);
  if (!worst.empty()) throw AssemblyError("assembled state violates invariants: " + worst);
}

inline DensityMatrix8 assemble_rho_sum(const ScenarioConfig& cfg, const CorrelatorSet& corr,
                                       const AssemblyOptions& opt = {}) {
  auto rho = assemble_rho_sum_unchecked(detail::excitation_phases(cfg), corr);
  if (opt.check_invariants) {
    AssemblyOptions o = opt;
    o.hermiticity_tol = std::max(opt.hermiticity_tol, cfg.tolerances.eigen);
    require_valid_state(rho, o);
  }
  return rho;
}

// Closed-form matrix elements (1-based row/column in the stored basis).
// Supported: (1,1), (2,2), (1,5).
inline cplx element_closed_form(int row, int col, const CorrelatorSet& corr, const ScenarioConfig& cfg) {
  const double LA = 4.0 * corr.log_f[0], LB = 4.0 * corr.log_f[1], LC = 4.0 * corr.log_f[2];
  const double tAB = 2.0 * corr.theta[0], tAC = 2.0 * corr.theta[1], tBC = 2.0 * corr.theta[2];
  const double oAB = 4.0 * corr.omega[0], oAC = 4.0 * corr.omega[1], oBC = 4.0 * corr.omega[2];
  // e^L cosh(o) and e^L sinh(o) without forming e^L and cosh(o) separately.
  auto ch = [](double L, double o) { return 0.5 * (std::exp(L + o) + std::exp(L - o)); };
  auto sh = [](double L, double o) { return 0.5 * (std::exp(L + o) - std::exp(L - o)); };

  if ((row == 1 && col == 1) || (row == 2 && col == 2)) {
    const double P = 1.0 + std::exp(LA) + std::exp(LB) * std::cos(tAB) + ch(LA + LB, oAB);
    // f_A^4 f_B^4 f_C^4 (cosh cosh cosh + sinh sinh sinh) = 1/4 sum over sign triples with product +1
    double triple = 0.0;
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        const int s3 = s1 * s2;
        triple += std::exp(LA + LB + LC + s1 * oAC + s2 * oBC + s3 * oAB);
      }
    const double Q = std::exp(LC) * std::cos(tAC) * std::cos(tBC) + std::cos(tBC) * ch(LA + LC, oAC) +
                     std::cos(tAB) * std::cos(tAC) * ch(LB + LC, oBC) - std::sin(tAB) * std::sin(tAC) * sh(LB + LC, oBC) +
                     0.25 * triple;
    return row == 1 ? cplx((P + Q) / 8.0, 0.0) : cplx((P - Q) / 8.0, 0.0);
  }
  if (row == 1 && col == 5) {
    const cplx I(0.0, 1.0);
    // cosh(oBC) sinh(oAB) sinh(oAC) + sinh(oBC) cosh(oAB) cosh(oAC)
    //   = 1/4 sum_{s1 s2 s3 = 1} s1 exp(s1 oBC + s2 oAB + s3 oAC)
    double mixed = 0.0;
    for (int s1 : {1, -1})
      for (int s2 : {1, -1}) {
        const int s3 = s1 * s2;
        mixed += s1 * std::exp(LA + LB + LC + s1 * oBC + s2 * oAB + s3 * oAC);
      }
    const cplx body = I * std::exp(LC) * std::cos(tAC) * std::sin(tBC) + I * std::sin(tBC) * ch(LA + LC, oAC) +
                      std::cos(tAB) * std::cos(tAC) * sh(LB + LC, oBC) - std::sin(tAB) * std::sin(tAC) * ch(LB + LC, oBC) +
                      0.25 * mixed;
    const double phase = -(cfg[1].gap * cfg[1].switch_time + cfg[2].gap * cfg[2].switch_time);
    return cplx(std::cos(phase), std::sin(phase)) * body / 8.0;
  }
  throw UnsupportedElementError("no closed form for element (" + std::to_string(row) + "," + std::to_string(col) + ")");
}

// Reduced state of two detectors (slots, ascending) in binary order.
inline Matrix4c partial_trace(const DensityMatrix8& rho, std::array<int, 2> keep) {
  if (keep[0] == keep[1] || keep[0] < 0 || keep[1] < 0 || keep[0] > 2 || keep[1] > 2) {
    throw ValidationError("partial_trace: keep must name two distinct detectors");
  }
  std::sort(keep.begin(), keep.end());
  const int drop = 3 - keep[0] - keep[1];
  const Matrix8c t = rho.tensor();
  auto bit = [](int idx, int slot) { return (idx >> (2 - slot)) & 1; };
  Matrix4c out = Matrix4c::Zero();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      if (bit(i, drop) != bit(j, drop)) continue;
      const int ri = 2 * bit(i, keep[0]) + bit(i, keep[1]);
      const int rj = 2 * bit(j, keep[0]) + bit(j, keep[1]);
      out(ri, rj) += t(i, j);
    }
  return out;
}

inline Matrix4c partial_trace(const DensityMatrix8& rho, Label keep1, Label keep2) {
  return partial_trace(rho, {static_cast<int>(keep1), static_cast<int>(keep2)});
}

// rho' = P rho P^dagger where P maps qubit slot i to slot perm[i] (binary order).
inline Matrix8c permute_qubits(const Matrix8c& t, const std::array<int, 3>& perm) {
  auto map = [&](int idx) {
    int out = 0;
    for (int s = 0; s < 3; ++s) {
      const int b = (idx >> (2 - s)) & 1;
      out |= b << (2 - perm[static_cast<std::size_t>(s)]);
    }
    return out;
  };
  Matrix8c r;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) r(map(i), map(j)) = t(i, j);
  return r;
}

}  // namespace udw
