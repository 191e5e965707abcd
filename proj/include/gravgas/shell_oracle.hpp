#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/rk45.hpp"

namespace gravgas {

// Concentric cold/warm mass shells: each obeys r''_j = -4*pi*gamma*m_j/r_j^2
// with its enclosed mass frozen until a crossing is detected.
struct ShellSystem {
  std::vector<double> labels;      // initial radii, strictly increasing
  std::vector<double> masses;      // enclosed mass at each label, nondecreasing
  std::vector<double> radii;       // current radii
  std::vector<double> velocities;  // current radial velocities
  double gamma = 1.0;

  std::size_t size() const { return labels.size(); }

  // Cold shells sampling an enclosed-mass law m(f) on (0, outer].
  template <class MassFn>
  static ShellSystem cold(int n, double outer, double gamma, MassFn&& mass_of_label) {
    ShellSystem s;
    s.gamma = gamma;
    for (int j = 1; j <= n; ++j) {
      const double f = outer * j / n;
      s.labels.push_back(f);
      s.masses.push_back(mass_of_label(f));
      s.radii.push_back(f);
      s.velocities.push_back(0.0);
    }
    return s;
  }
};

struct ShellEvent {
  enum class Type { Crossing, Collapse };
  Type type;
  double time;
  std::size_t index;  // inner shell of the crossing pair, or collapsing shell
};

struct ShellTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> radii;       // one vector per recorded time
  std::vector<std::vector<double>> velocities;
  std::vector<ShellEvent> events;
  double end_time = 0.0;  // time actually reached (event time when stopped)
};

struct ShellOracleOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double guard_fraction = 1e-6;  // collapse guard relative to the outer radius
  std::vector<double> sample_times;
};

namespace detail {

inline void shell_deriv(const std::vector<double>& masses, double gamma, double t,
                        const std::vector<double>& y, std::vector<double>& dy) {
  (void)t;
  const std::size_t n = masses.size();
  constexpr double tiny = 1e-300;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = std::max(y[j], tiny);
    dy[j] = y[n + j];
    dy[n + j] = -4.0 * std::numbers::pi * gamma * masses[j] / (r * r);
  }
}

}  // namespace detail

// Adaptive integration of the shell system up to t_end, recording the
// state at the requested sample times. Stops at the first shell-crossing
// or guard-radius event, with the event time located by bisection inside
// the offending step.
inline ShellTrajectory shell_integrate(const ShellSystem& init, double t_end,
                                       const ShellOracleOptions& opts = {}) {
  const std::size_t n = init.size();
  if (n == 0) throw Error("shell_integrate: empty system");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(init.radii[j] > 0.0)) throw Error("shell_integrate: radii must be positive");
    if (init.masses[j] < 0.0) throw Error("shell_integrate: negative mass");
    if (j > 0 && !(init.radii[j] > init.radii[j - 1]))
      throw Error("shell_integrate: radii must be strictly ordered");
  }
  const double guard =
      opts.guard_fraction * *std::max_element(init.radii.begin(), init.radii.end());

  std::vector<double> samples = opts.sample_times;
  std::sort(samples.begin(), samples.end());

  RkOptions rk;
  rk.rtol = opts.rtol;
  rk.atol = opts.atol;
  rk.h_init = 1e-6;

  auto deriv = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    detail::shell_deriv(init.masses, init.gamma, t, y, dy);
  };
  auto violated = [&](const std::vector<double>& y, ShellEvent::Type& type,
                      std::size_t& idx) {
    for (std::size_t j = 0; j < n; ++j) {
      if (y[j] <= guard) {
        type = ShellEvent::Type::Collapse;
        idx = j;
        return true;
      }
      if (j > 0 && y[j] <= y[j - 1]) {
        type = ShellEvent::Type::Crossing;
        idx = j - 1;
        return true;
      }
    }
    return false;
  };

  ShellTrajectory traj;
  auto record = [&](double t, const std::vector<double>& y) {
    traj.times.push_back(t);
    traj.radii.emplace_back(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n));
    traj.velocities.emplace_back(y.begin() + static_cast<std::ptrdiff_t>(n), y.end());
  };

  std::vector<double> y(2 * n);
  std::copy(init.radii.begin(), init.radii.end(), y.begin());
  std::copy(init.velocities.begin(), init.velocities.end(),
            y.begin() + static_cast<std::ptrdiff_t>(n));

  if (!samples.empty() && samples.front() == 0.0) record(0.0, y);

  double t = 0.0;
  std::size_t next_sample = 0;
  while (next_sample < samples.size() && samples[next_sample] <= 0.0) ++next_sample;

  while (t < t_end) {
    const double t_target =
        next_sample < samples.size() ? std::min(samples[next_sample], t_end) : t_end;
    double t_seg = t;
    std::vector<double> y_prev = y;
    bool stopped = false;
    integrate_adaptive(deriv, y, t, t_target, rk, [&](double tc, const std::vector<double>& yc) {
      ShellEvent::Type type;
      std::size_t idx;
      if (!violated(yc, type, idx)) {
        t_seg = tc;
        y_prev = yc;
        return true;
      }
      // Bisect the event time inside [t_seg, tc] by re-integrating the
      // sub-interval from the last clean state.
      double lo = t_seg, hi = tc;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        std::vector<double> probe = y_prev;
        if (mid > t_seg) integrate_adaptive(deriv, probe, t_seg, mid, rk,
                                            [](double, const std::vector<double>&) { return true; });
        ShellEvent::Type pt;
        std::size_t pi;
        if (violated(probe, pt, pi)) {
          hi = mid;
          type = pt;
          idx = pi;
        } else {
          lo = mid;
        }
      }
      traj.events.push_back({type, hi, idx});
      traj.end_time = hi;
      stopped = true;
      return false;
    });
    if (stopped) return traj;
    t = t_target;
    if (next_sample < samples.size() && t_target == samples[next_sample]) {
      record(t, y);
      ++next_sample;
    }
  }
  traj.end_time = t_end;
  return traj;
}

}  // namespace gravgas
