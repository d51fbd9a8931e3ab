#pragma once

#include <cmath>

namespace udw::special {

// Dawson's integral F(x) = exp(-x^2) * int_0^x exp(t^2) dt.
//
// |x| < 8: the positive-term series sum_n x^{2n+1} / (n! (2n+1)) for the
// inner integral, then scaled by exp(-x^2). Every term is positive so the
// sum carries no cancellation.
// |x| >= 8: asymptotic series 1/(2x) sum_n (2n-1)!! / (2x^2)^n, truncated at
// its smallest term (below 1e-27 relative at the switch point).
inline double dawson(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0.0;
  double result;
  if (ax < 8.0) {
    const double x2 = ax * ax;
    double term = ax;  // n = 0 numerator x^{2n+1}/n!
    double sum = ax;
    for (int n = 1; n < 400; ++n) {
      term *= x2 / n;
      const double contrib = term / (2.0 * n + 1.0);
      sum += contrib;
      if (contrib < 1e-18 * sum) break;
    }
    result = sum * std::exp(-x2);
  } else {
    const double inv2x2 = 1.0 / (2.0 * ax * ax);
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 200; ++n) {
      const double next = term * (2.0 * n - 1.0) * inv2x2;
      if (next >= term) break;
      term = next;
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    result = sum / (2.0 * ax);
  }
  return x < 0.0 ? -result : result;
}

// First, third and fifth derivatives of Dawson's integral, from the
// recurrence F' = 1 - 2 x F and F^(n+1) = -2 n F^(n-1) - 2 x F^(n).
struct DawsonDerivatives {
  double d1, d3, d5;
};

inline DawsonDerivatives dawson_odd_derivatives(double x) {
  const double f0 = dawson(x);
  const double f1 = 1.0 - 2.0 * x * f0;
  const double f2 = -2.0 * f0 - 2.0 * x * f1;
  const double f3 = -4.0 * f1 - 2.0 * x * f2;
  const double f4 = -6.0 * f2 - 2.0 * x * f3;
  const double f5 = -8.0 * f3 - 2.0 * x * f4;
  return {f1, f3, f5};
}

// sinh(x)/x with the removable singularity filled in.
inline double sinhc(double x) {
  if (std::fabs(x) < 1e-4) return 1.0 + x * x / 6.0;
  return std::sinh(x) / x;
}

// sin(x)/x with the removable singularity filled in.
inline double sinc(double x) {
  if (std::fabs(x) < 1e-4) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

}  // namespace udw::special
