#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/kepler.hpp"
#include "gravgas/parallel.hpp"
#include "gravgas/profile.hpp"
#include "gravgas/snapshot.hpp"

namespace gravgas {

inline constexpr double four_pi = 4.0 * std::numbers::pi;

struct SphericalOptions {
  double tol = 1e-12;            // Kepler / inversion residual tolerance
  double kepler_guard = 1e-8;    // refuse 1 + cos(alpha) below this
  double collapse_guard = 1e-8;  // refuse radii / Jacobians below this
  bool periodic_continuation = false;  // homogeneous case only
};

// Full oscillation period of the homogeneous sphere. Collapse happens at
// half a period.
inline double homogeneous_period(double rho0, double gamma) {
  return std::numbers::pi * std::sqrt(3.0 / (8.0 * std::numbers::pi * gamma * rho0));
}

inline double homogeneous_collapse_time(double rho0, double gamma) {
  return 0.5 * homogeneous_period(rho0, gamma);
}

// Velocity magnitude from per-label energy conservation,
//   v^2/2 = v0^2/2 + 4*pi*gamma*m_f*(1/r - 1/f),
// with the infall sign on the first branch (r <= f).
inline double velocity_from_energy(double f, double r, double m_f, double v0_f, double gamma) {
  const double radicand = v0_f * v0_f + 2.0 * four_pi * gamma * m_f * (1.0 / r - 1.0 / f);
  if (radicand < 0.0)
    throw NegativeRadicand("velocity_from_energy: (f, r) pair is outside the reachable region");
  return -std::sqrt(radicand);
}

// Closed-form state of the uniform-density sphere: the label map is
// f = 2r/(1 + cos(alpha)) and the density stays spatially uniform,
// rho(t) = rho0 * (2/(1 + cos(alpha)))^3.
inline SphericalState homogeneous_state(double rho0, double gamma, double t,
                                        const std::vector<double>& r_grid,
                                        const SphericalOptions& opts = {}) {
  if (!(rho0 > 0.0) || !(gamma > 0.0))
    throw Error("homogeneous_state: rho0 and gamma must be positive");
  const double period = homogeneous_period(rho0, gamma);
  const double t_c = 0.5 * period;
  double tau = t;
  if (opts.periodic_continuation) {
    tau = std::fmod(t, period);
    if (tau < 0.0) tau += period;
  } else if (t >= t_c) {
    throw CollapseSingularity("homogeneous sphere collapses at t = " + std::to_string(t_c), t_c);
  }
  double y = -two_pi * tau / period;
  if (y <= -two_pi) y = -two_pi + 1e-300;
  const double alpha = kepler_solve(y, opts.tol);
  const double u = 1.0 + std::cos(alpha);
  if (u < opts.kepler_guard)
    throw CollapseSingularity("requested time is inside the collapse guard", t_c);

  const double rho = rho0 * (2.0 / u) * (2.0 / u) * (2.0 / u);
  // Chain rule through the Kepler phase: v = -df/dt / df/dr, which gives
  //   v = r * sin(alpha) * (2*pi/period) / (1 + cos(alpha))^2.
  // See docs/homogeneous_velocity.md for the derivation and the oracle
  // test pinning this form.
  const double vel_slope = std::sin(alpha) * (two_pi / period) / (u * u);

  SphericalState st;
  st.t = t;
  st.coord = r_grid;
  st.density.resize(r_grid.size());
  st.velocity.resize(r_grid.size());
  st.cumulative.resize(r_grid.size());
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    const double f = 2.0 * r / u;
    st.density[i] = rho;
    st.velocity[i] = vel_slope * r;
    st.cumulative[i] = rho0 * f * f * f / 3.0;
  }
  return st;
}

namespace detail {

// Kepler phase data of the cold label f at time t.
struct LabelPhase {
  double alpha;   // in (-pi, 0]
  double u;       // 1 + cos(alpha)
  double omega;   // sqrt(8*pi*gamma*m(f)/f^3); zero when massless
  double radius;  // f * u / 2
};

inline LabelPhase cold_label_phase(const CumulativeProfile& m, double gamma, double f, double t,
                                   const SphericalOptions& opts) {
  LabelPhase p{};
  const double m_f = m.value(f);
  if (m_f <= 0.0 || f <= 0.0) {
    p.alpha = 0.0;
    p.u = 2.0;
    p.omega = 0.0;
    p.radius = f;
    return p;
  }
  p.omega = std::sqrt(2.0 * four_pi * gamma * m_f / (f * f * f));
  const double y = -2.0 * t * p.omega;
  if (y <= -std::numbers::pi) {
    const double t_label = std::numbers::pi / (2.0 * p.omega);
    throw CollapseSingularity("label f = " + std::to_string(f) + " collapses at t = " +
                                  std::to_string(t_label),
                              t_label);
  }
  p.alpha = kepler_solve(y, opts.tol);
  p.u = 1.0 + std::cos(p.alpha);
  p.radius = f * p.u / 2.0;
  return p;
}

inline double cold_label_radius(const CumulativeProfile& m, double gamma, double f, double t,
                                const SphericalOptions& opts) {
  return cold_label_phase(m, gamma, f, t, opts).radius;
}

// Earliest time in (0, t_hi] at which the label map f -> r(f, t) stops
// being strictly increasing over the given label grid, by bisection.
inline double bisect_crossing_time(const CumulativeProfile& m, double gamma,
                                   const std::vector<double>& labels, double t_hi,
                                   const SphericalOptions& opts) {
  auto monotone_at = [&](double t) {
    double prev = -1.0;
    for (double f : labels) {
      double r;
      try {
        r = cold_label_radius(m, gamma, f, t, opts);
      } catch (const CollapseSingularity&) {
        return false;
      }
      if (r <= prev) return false;
      prev = r;
    }
    return true;
  };
  double lo = 0.0, hi = t_hi;
  for (int it = 0; it < 60 && (hi - lo) > 1e-9 * t_hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (monotone_at(mid))
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

}  // namespace detail

// Radius of the cold label f at time t (the forward characteristic map).
inline double label_radius(const CumulativeProfile& m, double gamma, double f, double t,
                           const SphericalOptions& opts = {}) {
  return detail::cold_label_radius(m, gamma, f, t, opts);
}

// General cold collapse (initial velocity identically zero) for an
// arbitrary enclosed-mass profile. For each output radius the label f and
// Kepler angle alpha are found from
//   r = f*(1 + cos(alpha))/2,   alpha + sin(alpha) = -2*t*sqrt(8*pi*gamma*m(f)/f^3),
// and the density follows by differentiating through the root solve.
inline SphericalState cold_collapse_state(const CumulativeProfile& m, double gamma, double t,
                                          const std::vector<double>& r_grid,
                                          const SphericalOptions& opts = {}) {
  if (m.role() != CumulativeRole::SphericalMass)
    throw Error("cold_collapse_state needs a spherical-mass cumulative profile");
  if (!(gamma > 0.0)) throw Error("cold_collapse_state: gamma must be positive");
  if (r_grid.empty()) throw Error("cold_collapse_state: empty grid");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0)) throw Error("spherical grid must exclude r = 0");
    if (i > 0 && !(r_grid[i] > r_grid[i - 1])) throw Error("grid must be strictly increasing");
  }

  // Shell-crossing check over the label grid: the characteristic map must
  // stay strictly increasing or the inverse is multivalued.
  {
    double prev = 0.0;
    bool crossed = false;
    for (double f : r_grid) {
      const double r = detail::cold_label_radius(m, gamma, f, t, opts);
      if (r <= prev) {
        crossed = true;
        break;
      }
      prev = r;
    }
    if (crossed) {
      const double when = detail::bisect_crossing_time(m, gamma, r_grid, t, opts);
      throw ShellCrossing("shell crossing at t = " + std::to_string(when), when);
    }
  }

  SphericalState st;
  st.t = t;
  st.coord = r_grid;
  st.density.resize(r_grid.size());
  st.velocity.resize(r_grid.size());
  st.cumulative.resize(r_grid.size());

  parallel_for(r_grid.size(), [&](std::size_t i) {
    const double r = r_grid[i];
    // Bracket the label: cold infall means r(f, t) <= f, so f >= r.
    double lo = r;
    double hi = r;
    double r_hi = detail::cold_label_radius(m, gamma, hi, t, opts);
    int guard_iter = 0;
    while (r_hi < r) {
      hi *= 2.0;
      if (++guard_iter > 200) throw NoBracket("cold_collapse_state: label bracket not found");
      r_hi = detail::cold_label_radius(m, gamma, hi, t, opts);
    }
    double f = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
      const double rf = detail::cold_label_radius(m, gamma, f, t, opts);
      if (std::abs(rf - r) < opts.tol * std::max(1.0, r)) break;
      if (rf < r)
        lo = f;
      else
        hi = f;
      f = 0.5 * (lo + hi);
    }

    const auto phase = detail::cold_label_phase(m, gamma, f, t, opts);
    if (phase.u < opts.kepler_guard || phase.radius < opts.collapse_guard * r_grid.back())
      throw CollapseSingularity("label at r = " + std::to_string(r) +
                                " is inside the collapse guard");
    const double m_f = m.value(f);
    const double m_prime = m.derivative(f);  // f^2 * rho0(f)
    // dr/df = u/2 + f*sin(alpha)*t*omega'(f)/u with
    // omega'(f) = 4*pi*gamma*(m'/f^3 - 3 m/f^4)/omega.
    double drdf;
    if (phase.omega == 0.0) {
      drdf = 1.0;
    } else {
      const double omega_prime =
          four_pi * gamma * (m_prime / (f * f * f) - 3.0 * m_f / (f * f * f * f)) / phase.omega;
      drdf = phase.u / 2.0 + f * std::sin(phase.alpha) * t * omega_prime / phase.u;
    }
    if (drdf < opts.collapse_guard)
      throw CollapseSingularity("density caustic at r = " + std::to_string(r));

    st.density[i] = m_prime / (r * r * drdf);
    st.cumulative[i] = m_f;
    st.velocity[i] = (m_f > 0.0 && r < f) ? velocity_from_energy(f, r, m_f, 0.0, gamma) : 0.0;
  });
  return st;
}

// Earliest per-label collapse time of cold data, min over a label grid
// (each label reaches r = 0 when its Kepler angle hits -pi).
inline double cold_collapse_time(const CumulativeProfile& m, double gamma,
                                 const std::vector<double>& labels) {
  double best = std::numeric_limits<double>::infinity();
  for (double f : labels) {
    const double m_f = m.value(f);
    if (m_f <= 0.0 || f <= 0.0) continue;
    const double omega = std::sqrt(2.0 * four_pi * gamma * m_f / (f * f * f));
    best = std::min(best, std::numbers::pi / (2.0 * omega));
  }
  return best;
}

}  // namespace gravgas
