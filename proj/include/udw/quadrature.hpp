#pragma once

// Adaptive Gauss-Kronrod integration over [0, inf) for Gaussian-damped,
// oscillatory integrands.
//
// The half line is truncated at k_max = 6.5 / decay_width, where the damping
// exp(-decay_width^2 k^2) has fallen below 5e-19. [0, k_max] is cut into
// initial panels no wider than pi / (4 * max_frequency) so that each panel
// sees a bounded phase. Panels are then bisected, worst error first, until
// the summed error estimate meets max(rel_tol * |I|, abs_floor) or the
// subdivision budget runs out.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "udw/errors.hpp"

namespace udw::quadrature {

struct Result {
  double value = 0.0;
  double err_est = 0.0;
  int evaluations = 0;
  int panels = 0;
};

struct Options {
  double rel_tol = 1e-10;
  double abs_floor = 1e-14;
  double decay_width = 1.0;    // sigma in exp(-sigma^2 k^2)
  double max_frequency = 0.0;  // largest angular frequency in k
  int max_panels = 20000;
  double truncation_scale = 6.5;
};

namespace detail {

struct Panel {
  double a, b, value, err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

// One Gauss-Kronrod 7/15 panel. Error estimate is |K15 - G7|.
template <class F>
Panel gk15(F& f, double a, double b, int& evals) {
  using gk = boost::math::quadrature::gauss_kronrod<double, 15>;
  using g = boost::math::quadrature::gauss<double, 7>;
  const auto& xk = gk::abscissa();
  const auto& wk = gk::weights();
  const auto& wg = g::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double f0 = f(c);
  double kron = wk[0] * f0;
  double gauss = wg[0] * f0;
  for (std::size_t i = 1; i < xk.size(); ++i) {
    const double fp = f(c + h * xk[i]);
    const double fm = f(c - h * xk[i]);
    kron += wk[i] * (fp + fm);
    // The 7-point Gauss nodes are the even-indexed Kronrod nodes.
    if (i % 2 == 0) gauss += wg[i / 2] * (fp + fm);
  }
  evals += 15;
  return {a, b, kron * h, std::fabs((kron - gauss) * h)};
}

}  // namespace detail

// Integrate f over [a, b] adaptively, starting from `initial_panels` equal panels.
template <class F>
Result integrate_interval(F&& f, double a, double b, int initial_panels, const Options& opt) {
  Result res;
  std::priority_queue<detail::Panel> heap;
  const int n0 = std::max(1, initial_panels);
  const double w = (b - a) / n0;
  double total = 0.0;
  double err = 0.0;
  for (int i = 0; i < n0; ++i) {
    const double lo = a + w * i;
    const double hi = (i + 1 == n0) ? b : a + w * (i + 1);
    auto p = detail::gk15(f, lo, hi, res.evaluations);
    total += p.value;
    err += p.err;
    heap.push(p);
  }
  auto converged = [&] { return err <= std::max(opt.rel_tol * std::fabs(total), opt.abs_floor); };
  int panels = n0;
  while (!converged()) {
    if (panels >= opt.max_panels) {
      throw IntegrationError("quadrature did not converge within " + std::to_string(opt.max_panels) + " panels",
                             total, err);
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw IntegrationError("quadrature panel collapsed below floating-point resolution", total, err);
    }
    auto left = detail::gk15(f, worst.a, mid, res.evaluations);
    auto right = detail::gk15(f, mid, worst.b, res.evaluations);
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum from the panels so the result does not carry the running-update roundoff.
  double clean_total = 0.0;
  double clean_err = 0.0;
  std::vector<detail::Panel> all;
  all.reserve(heap.size());
  while (!heap.empty()) {
    all.push_back(heap.top());
    heap.pop();
  }
  std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.a < r.a; });
  for (const auto& p : all) {
    clean_total += p.value;
    clean_err += p.err;
  }
  res.value = clean_total;
  res.err_est = clean_err;
  res.panels = panels;
  return res;
}

// Integral of f over [0, inf) for integrands decaying like exp(-decay_width^2 k^2).
template <class F>
Result integrate_semi_infinite(F&& f, const Options& opt) {
  if (!(opt.decay_width > 0.0)) throw IntegrationError("decay_width must be positive", 0.0, 0.0);
  if (!(opt.rel_tol > 0.0)) throw IntegrationError("rel_tol must be positive", 0.0, 0.0);
  const double k_max = opt.truncation_scale / opt.decay_width;
  int panels = 8;
  if (opt.max_frequency > 0.0) {
    const double width = std::numbers::pi / (4.0 * opt.max_frequency);
    panels = std::max(panels, static_cast<int>(std::ceil(k_max / width)));
  }
  panels = std::min(panels, opt.max_panels / 2);
  return integrate_interval(std::forward<F>(f), 0.0, k_max, panels, opt);
}

template <class F>
Result integrate_semi_infinite(F&& f, double rel_tol, double decay_width = 1.0, double max_frequency = 0.0) {
  Options opt;
  opt.rel_tol = rel_tol;
  opt.decay_width = decay_width;
  opt.max_frequency = max_frequency;
  return integrate_semi_infinite(std::forward<F>(f), opt);
}

}  // namespace udw::quadrature
