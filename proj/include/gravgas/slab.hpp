#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/parallel.hpp"
#include "gravgas/profile.hpp"
#include "gravgas/snapshot.hpp"

namespace gravgas {

struct SlabOptions {
  double tol = 1e-12;
  double collapse_guard = 1e-8;  // refuse 1 - s'(f,t) below this
};

// Characteristic displacement, exact for arbitrary initial velocity:
//   s(f, t) = -t*v0(f) + 4*pi*gamma*(t^2/2)*g(f).
inline double displacement(double f, double t, const CumulativeProfile& g,
                           const ProfileFunction& v0, double gamma) {
  return -t * v0(f) + 2.0 * std::numbers::pi * gamma * t * t * g.value(f);
}

// d/df of the displacement; g'(f) is the initial density at the label.
inline double displacement_slope(double f, double t, const CumulativeProfile& g,
                                 const ProfileFunction& v0, double gamma) {
  return -t * v0.derivative(f) + 2.0 * std::numbers::pi * gamma * t * t * g.derivative(f);
}

namespace detail {

// Label points where the map Jacobian 1 - s'(f,t) can attain its minimum:
// profile knots, segment midpoints, and a modest fill-in per segment.
inline std::vector<double> critical_labels(const CumulativeProfile& g,
                                           const ProfileFunction& v0) {
  std::vector<double> pts;
  auto add_knots = [&pts](const std::vector<double>& k) {
    for (std::size_t i = 0; i < k.size(); ++i) {
      pts.push_back(k[i]);
      if (i + 1 < k.size())
        for (int j = 1; j < 8; ++j) pts.push_back(k[i] + (k[i + 1] - k[i]) * j / 8.0);
    }
  };
  add_knots(g.base().knots());
  add_knots(v0.knots());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

// First time at which some label's Jacobian 1 - s'(f,t) reaches zero, i.e.
// the single-stream solution ends. The per-label condition
//   2*pi*gamma*rho0(f)*t^2 - v0'(f)*t - 1 = 0
// is quadratic in t, so the earliest root is taken in closed form and
// minimized over the critical label set. Returns nothing when no label
// ever collapses (e.g. zero density, no compressive velocity).
inline std::optional<double> collapse_time(const ProfileFunction& rho0, const ProfileFunction& v0,
                                           double gamma) {
  const CumulativeProfile g = planar_g(rho0);
  double best = std::numeric_limits<double>::infinity();
  for (double f : detail::critical_labels(g, v0)) {
    const double rho = g.derivative(f);
    const double vp = v0.derivative(f);
    const double a = 2.0 * std::numbers::pi * gamma * rho;
    double t;
    if (a > 0.0) {
      t = (vp + std::sqrt(vp * vp + 4.0 * a)) / (2.0 * a);
    } else if (vp < 0.0) {
      t = -1.0 / vp;
    } else {
      continue;
    }
    best = std::min(best, t);
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best;
}

// Invert x = f - s(f, t) for the label f by a bracketed monotone root
// solve. The Lagrange series (lagrange_series.hpp) cross-checks this
// inside its convergence domain; the root solve is the production path.
inline double characteristic_invert(double x, double t, const CumulativeProfile& g,
                                    const ProfileFunction& v0, double gamma, double tol = 1e-12) {
  auto map = [&](double f) { return f - displacement(f, t, g, v0, gamma); };

  // Expand a bracket around x; labels outside the support translate
  // rigidly so the image covers the whole line for integrable density.
  double half = 1.0 + std::abs(x) + std::abs(t) * (1.0 + 2.0 * std::numbers::pi * gamma *
                                                             std::abs(t) * g.total_mass());
  double lo = x - half, hi = x + half;
  int guard_iter = 0;
  while (map(lo) > x) {
    lo -= half;
    half *= 2.0;
    if (++guard_iter > 200) throw NoBracket("characteristic_invert: no lower bracket");
  }
  guard_iter = 0;
  while (map(hi) < x) {
    hi += half;
    half *= 2.0;
    if (++guard_iter > 200) throw NoBracket("characteristic_invert: no upper bracket");
  }

  // The map must be increasing on the bracket or the inverse is multivalued.
  for (double f : detail::critical_labels(g, v0)) {
    if (f < lo || f > hi) continue;
    if (1.0 - displacement_slope(f, t, g, v0, gamma) <= 0.0)
      throw SheetCrossing("sheet crossing: label map not monotone at t = " + std::to_string(t),
                          t);
  }

  double f = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double res = map(f) - x;
    if (std::abs(res) < tol) break;
    if (res < 0.0)
      lo = f;
    else
      hi = f;
    f = 0.5 * (lo + hi);
  }
  return f;
}

// Full planar state at time t: for each grid point the label is inverted,
// then g(x,t) = g(f), v = v0(f) - 4*pi*gamma*t*g(f), and the density comes
// from the chain rule rho = g'(f) / (1 - s'(f,t)) rather than from
// differencing g(x,t) on the grid.
inline SlabState slab_state(const ProfileFunction& rho0, const ProfileFunction& v0, double gamma,
                            double t, const std::vector<double>& x_grid,
                            const SlabOptions& opts = {}) {
  if (!(gamma > 0.0)) throw Error("slab_state: gamma must be positive");
  const CumulativeProfile g = planar_g(rho0);

  if (const auto t_c = collapse_time(rho0, v0, gamma); t_c && t >= *t_c)
    throw CollapseSingularity("slab collapses at t = " + std::to_string(*t_c) +
                                  "; requested t = " + std::to_string(t),
                              *t_c);

  SlabState st;
  st.t = t;
  st.coord = x_grid;
  st.density.resize(x_grid.size());
  st.velocity.resize(x_grid.size());
  st.cumulative.resize(x_grid.size());
  for (double k : rho0.knots()) st.edges.push_back(k - displacement(k, t, g, v0, gamma));

  parallel_for(x_grid.size(), [&](std::size_t i) {
    const double x = x_grid[i];
    double f = characteristic_invert(x, t, g, v0, gamma, opts.tol);
    // A grid point landing on a moving profile edge takes the label of the
    // edge knot exactly, so the one-sided (interior) value is used.
    for (std::size_t e = 0; e < st.edges.size(); ++e) {
      if (std::abs(x - st.edges[e]) <= opts.tol * std::max(1.0, std::abs(x))) {
        f = rho0.knots()[e];
        break;
      }
    }
    const double jac = 1.0 - displacement_slope(f, t, g, v0, gamma);
    if (jac < opts.collapse_guard)
      throw CollapseSingularity("slab density singular at x = " + std::to_string(x));
    const double g_f = g.value(f);
    st.cumulative[i] = g_f;
    st.velocity[i] = v0(f) - 4.0 * std::numbers::pi * gamma * t * g_f;
    st.density[i] = g.derivative(f) / jac;
  });
  return st;
}

}  // namespace gravgas
