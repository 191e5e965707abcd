#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "gravgas/errors.hpp"

namespace gravgas {

struct RkOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-4;
  double h_min = 1e-15;
  long max_steps = 50'000'000;
};

namespace detail {

// Dormand-Prince 5(4) embedded pair.
struct Dopri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace detail

// One trial DOPRI5 step from (t, y) with size h. Writes the 5th-order
// result into y_out and returns the scaled error-norm estimate.
template <class Deriv>
double dopri5_step(Deriv&& f, double t, const std::vector<double>& y, double h,
                   std::vector<double>& y_out, const RkOptions& opts) {
  using D = detail::Dopri5;
  const std::size_t n = y.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n);
  f(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * D::a21 * k1[i];
  f(t + D::c2 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
  f(t + D::c3 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
  f(t + D::c4 * h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] + D::a54 * k4[i]);
  f(t + D::c5 * h, tmp, k5);
  for (std::size_t i = 0; i < n; ++i)
    tmp[i] = y[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] + D::a64 * k4[i] +
                         D::a65 * k5[i]);
  f(t + h, tmp, k6);
  for (std::size_t i = 0; i < n; ++i)
    y_out[i] = y[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] + D::b5 * k5[i] +
                           D::b6 * k6[i]);
  f(t + h, y_out, k7);

  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] + D::e5 * k5[i] +
                          D::e6 * k6[i] + D::e7 * k7[i]);
    const double scale = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(y_out[i]));
    const double r = e / scale;
    err += r * r;
  }
  return std::sqrt(err / static_cast<double>(n));
}

// Adaptive integration from t0 to t1 (t1 > t0). The observer is called
// after every accepted step as obs(t, y); returning false stops the run.
template <class Deriv, class Observer>
void integrate_adaptive(Deriv&& f, std::vector<double>& y, double t0, double t1,
                        const RkOptions& opts, Observer&& obs) {
  double t = t0;
  double h = std::min(opts.h_init, t1 - t0);
  std::vector<double> y_new(y.size());
  long steps = 0;
  while (t < t1) {
    if (++steps > opts.max_steps) throw StepFailure("integrate_adaptive: step budget exhausted");
    if (t + h > t1) h = t1 - t;
    const double err = dopri5_step(f, t, y, h, y_new, opts);
    if (std::isfinite(err) && err <= 1.0) {
      t += h;
      y.swap(y_new);
      if (!obs(t, y)) return;
      const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
      h *= std::min(5.0, std::max(0.2, grow));
    } else {
      const double shrink = std::isfinite(err) ? std::max(0.1, 0.9 * std::pow(err, -0.2)) : 0.1;
      h *= shrink;
      if (h < opts.h_min) throw StepFailure("integrate_adaptive: step size underflow");
    }
  }
}

}  // namespace gravgas
