#pragma once

// Negativities and the pi-tangle of a three-qubit state.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "udw/density_matrix.hpp"
#include "udw/errors.hpp"

namespace udw {

// Transpose the indices of one qubit of a 2^m x 2^m operator in binary order.
// Qubit 0 is the most significant bit.
template <class Derived>
Eigen::Matrix<cplx, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> partial_transpose(
    const Eigen::MatrixBase<Derived>& M, int qubit) {
  const int n = static_cast<int>(M.rows());
  int m = 0;
  while ((1 << m) < n) ++m;
  if ((1 << m) != n || M.cols() != n || m < 2 || m > 3) {
    throw std::invalid_argument("partial_transpose: expected a 4x4 or 8x8 matrix");
  }
  if (qubit < 0 || qubit >= m) throw std::out_of_range("partial_transpose: qubit index out of range");
  const int mask = 1 << (m - 1 - qubit);
  Eigen::Matrix<cplx, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime> out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // swap the selected bit between row and column index
      const int bi = i & mask, bj = j & mask;
      const int ii = (i & ~mask) | bj;
      const int jj = (j & ~mask) | bi;
      out(ii, jj) = M(i, j);
    }
  return out;
}

// Ascending eigenvalues of a Hermitian matrix.
template <class Derived>
std::vector<double> eigvals_hermitian(const Eigen::MatrixBase<Derived>& M, double herm_tol = 1e-10) {
  using Mat = Eigen::Matrix<cplx, Derived::RowsAtCompileTime, Derived::ColsAtCompileTime>;
  const Mat m = M;
  if (m.rows() != m.cols()) throw std::invalid_argument("eigvals_hermitian: matrix must be square");
  const double asym = m.size() ? (m - m.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > herm_tol) {
    throw NumericalError("eigvals_hermitian: input not Hermitian (max |M - M^dagger| = " + std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigvals_hermitian: eigensolver did not converge");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

inline constexpr double kNegativityClamp = 1e-10;

namespace detail {

// ||M||_1 - 1 for Hermitian M, clamped per kNegativityClamp.
template <class Derived>
double trace_norm_minus_one(const Eigen::MatrixBase<Derived>& M, const char* what) {
  const auto ev = eigvals_hermitian(M);
  double norm = 0.0;
  for (double e : ev) norm += std::fabs(e);
  const double n = norm - 1.0;
  if (n < -kNegativityClamp) {
    throw NumericalError(std::string(what) + ": trace norm below 1 (" + std::to_string(n) +
                         "), input state is not normalized");
  }
  return std::max(n, 0.0);
}

}  // namespace detail

// N_{D(EF)} = ||rho^{T_D}|| - 1
inline double negativity_one_vs_rest(const DensityMatrix8& rho, int slot) {
  return detail::trace_norm_minus_one(partial_transpose(rho.tensor(), slot), "negativity_one_vs_rest");
}

// N_{D(E)} = ||(Tr_F rho)^{T_D}|| - 1
inline double negativity_pairwise(const DensityMatrix8& rho, int slot_d, int slot_e) {
  const Matrix4c reduced = partial_trace(rho, {slot_d, slot_e});
  return detail::trace_norm_minus_one(partial_transpose(reduced, 0), "negativity_pairwise");
}

struct EntanglementReport {
  std::array<double, 3> one_vs_rest{0.0, 0.0, 0.0};  // N_A(BC), N_B(AC), N_C(AB)
  std::array<double, 3> pairwise{0.0, 0.0, 0.0};     // N_A(B), N_A(C), N_B(C)
  std::array<double, 3> pi_components{0.0, 0.0, 0.0};
  double pi_tangle = 0.0;  // max(0, mean of pi_components)
  double pi_raw = 0.0;     // unclamped mean

  double one_vs_rest_of(int slot) const { return one_vs_rest[static_cast<std::size_t>(slot)]; }
  double pairwise_of(int i, int j) const { return pairwise[static_cast<std::size_t>(pair_index(i, j))]; }
};

inline EntanglementReport pi_tangle(const DensityMatrix8& rho) {
  EntanglementReport r;
  const Matrix8c t = rho.tensor();
  for (int slot = 0; slot < 3; ++slot) {
    r.one_vs_rest[static_cast<std::size_t>(slot)] =
        detail::trace_norm_minus_one(partial_transpose(t, slot), "negativity_one_vs_rest");
  }
  for (std::size_t p = 0; p < 3; ++p) r.pairwise[p] = negativity_pairwise(rho, kPairs[p][0], kPairs[p][1]);
  for (int d = 0; d < 3; ++d) {
    double pd = r.one_vs_rest_of(d) * r.one_vs_rest_of(d);
    for (int e = 0; e < 3; ++e) {
      if (e == d) continue;
      const double n = r.pairwise_of(d, e);
      pd -= n * n;
    }
    r.pi_components[static_cast<std::size_t>(d)] = pd;
  }
  r.pi_raw = (r.pi_components[0] + r.pi_components[1] + r.pi_components[2]) / 3.0;
  r.pi_tangle = std::max(0.0, r.pi_raw);
  return r;
}

}  // namespace udw
