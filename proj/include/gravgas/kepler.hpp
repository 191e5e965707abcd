#pragma once

#include <cmath>
#include <numbers>

#include "gravgas/errors.hpp"

namespace gravgas {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Solve alpha + sin(alpha) = y on the collapse branch alpha in (-2*pi, 0].
// Safeguarded Newton: the iterate is forced to stay inside the current
// bisection bracket, and we fall back to bisection where the derivative
// 1 + cos(alpha) degenerates (near alpha = -pi).
inline double kepler_solve(double y, double tol = 1e-12) {
  if (!(tol > 0.0)) throw Error("kepler_solve: tol must be positive");
  if (y > 0.0 || y <= -two_pi)
    throw OutOfRange("kepler_solve: y must lie in (-2*pi, 0]");
  if (y == 0.0) return 0.0;

  double lo = -two_pi;  // K(lo) = -2*pi < y
  double hi = 0.0;      // K(hi) = 0 >= y
  double alpha = y;     // |sin| <= 1 makes y itself a decent start
  for (int it = 0; it < 300; ++it) {
    const double res = alpha + std::sin(alpha) - y;
    if (std::abs(res) < tol) return alpha;
    if (res > 0.0)
      hi = alpha;
    else
      lo = alpha;
    const double deriv = 1.0 + std::cos(alpha);
    double next;
    if (deriv < 1e-4) {
      next = 0.5 * (lo + hi);
    } else {
      next = alpha - res / deriv;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    }
    alpha = next;
  }
  return alpha;  // bisection has contracted the bracket far below tol by now
}

}  // namespace gravgas
