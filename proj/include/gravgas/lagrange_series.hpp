#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "gravgas/errors.hpp"

namespace gravgas {

// Supplies local derivative data of the displacement s at a point:
// jet(x, k) returns {s(x), s'(x), ..., s^(k)(x)} (k + 1 entries), or
// throws DerivativeUnavailable.
using JetFunction = std::function<std::vector<double>(double x, int max_order)>;

struct SeriesResult {
  double value = 0.0;
  int order = 0;
  std::vector<double> term_magnitudes;  // |term_n| for n = 1..order
  bool converged = false;
};

struct ConvergenceEstimate {
  double ratio = 0.0;
  bool divergent = false;
};

// Hard truncation cap: beyond this, cancellation in the repeated jet
// products dominates the tail.
inline constexpr int kMaxSeriesOrder = 30;

// Truncated Lagrange inversion of x = f - s(f):
//   f = x + sum_{n>=1} (1/n!) * d^{n-1}/dx^{n-1} [s(x)^n].
// Term n is computed from the truncated Taylor jet of s at x: with
// c_k the jet coefficients of s(x+h)^n, the term equals c_{n-1}/n.
inline SeriesResult invert_series(const JetFunction& s, double x, int order, double tol) {
  if (order < 1 || order > kMaxSeriesOrder)
    throw std::invalid_argument("invert_series: order must be in [1, 30]");
  if (!(tol > 0.0)) throw std::invalid_argument("invert_series: tol must be positive");

  std::vector<double> derivs = s(x, order - 1);
  if (static_cast<int>(derivs.size()) < order)
    throw DerivativeUnavailable("invert_series: jet shorter than requested order");

  // Taylor coefficients a_k = s^(k)(x)/k!, truncated at h^(order-1).
  std::vector<double> coeff(order);
  double fact = 1.0;
  for (int k = 0; k < order; ++k) {
    if (k > 0) fact *= k;
    coeff[k] = derivs[static_cast<std::size_t>(k)] / fact;
  }

  SeriesResult res;
  res.order = order;
  res.value = x;
  std::vector<double> power = coeff;  // jet of s^n, starting at n = 1
  std::vector<double> next(order);
  for (int n = 1; n <= order; ++n) {
    if (n > 1) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int i = 0; i < order; ++i) {
        if (power[static_cast<std::size_t>(i)] == 0.0) continue;
        for (int j = 0; i + j < order; ++j)
          next[static_cast<std::size_t>(i + j)] +=
              power[static_cast<std::size_t>(i)] * coeff[static_cast<std::size_t>(j)];
      }
      power = next;
    }
    const double term = power[static_cast<std::size_t>(n - 1)] / n;
    res.value += term;
    res.term_magnitudes.push_back(std::abs(term));
  }

  const double last = res.term_magnitudes.back();
  const double prev = order >= 2 ? res.term_magnitudes[res.term_magnitudes.size() - 2] : tol;
  res.converged = last < tol && (order < 2 || last <= prev);
  return res;
}

// Geometric tail ratio estimated from the last magnitudes; a ratio at or
// above one means the partial sums are not settling and the result must
// not be trusted.
inline ConvergenceEstimate convergence_estimate(const SeriesResult& result) {
  if (result.order < 3)
    throw std::invalid_argument("convergence_estimate: needs order >= 3");
  const auto& mags = result.term_magnitudes;
  double log_sum = 0.0;
  int count = 0;
  for (std::size_t n = mags.size() - 1; n >= 1 && count < 4; --n) {
    if (mags[n] == 0.0 || mags[n - 1] == 0.0) continue;
    log_sum += std::log(mags[n] / mags[n - 1]);
    ++count;
  }
  ConvergenceEstimate est;
  est.ratio = count > 0 ? std::exp(log_sum / count) : 0.0;
  // small allowance: log/exp round-trips can land a ratio of exactly one
  // a few ulps below it
  est.divergent = est.ratio >= 1.0 - 1e-12;
  return est;
}

// Jet from point samples of s via central differences with one Richardson
// step. Usable to order ~6; above that the cancellation error grows fast,
// which is why closed-form jets are preferred whenever available.
inline JetFunction finite_difference_jet(std::function<double(double)> fn) {
  return [fn](double x, int max_order) {
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
    out[0] = fn(x);
    const double scale = std::max(1.0, std::abs(x));
    for (int k = 1; k <= max_order; ++k) {
      const double h = scale * std::pow(1e-16, 1.0 / (k + 2));
      auto central = [&](double step) {
        double acc = 0.0;
        double binom = 1.0;
        for (int j = 0; j <= k; ++j) {
          const double node = x + (0.5 * k - j) * step;
          acc += ((j % 2 == 0) ? binom : -binom) * fn(node);
          binom = binom * (k - j) / (j + 1);
        }
        return acc / std::pow(step, k);
      };
      const double d1 = central(h);
      const double d2 = central(0.5 * h);
      out[static_cast<std::size_t>(k)] = (4.0 * d2 - d1) / 3.0;
    }
    return out;
  };
}

}  // namespace gravgas
