#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/rk45.hpp"

namespace gravgas {

enum class PerturbationMode { Gravitating, Sound };

struct PerturbationParams {
  double amplitude0 = 1e-6;  // initial density perturbation
  double rate0 = 0.0;        // initial time derivative
  double sound_speed = 1.0;  // sound mode only
  double wavenumber = 1.0;   // sound mode only
  int samples = 400;
};

struct PerturbationRun {
  PerturbationMode mode = PerturbationMode::Gravitating;
  std::vector<double> times;
  std::vector<double> values;  // perturbation amplitude rho~
  std::vector<double> rates;   // d(rho~)/dt
  double fitted_exponent = 0.0;
};

namespace detail {

inline double fit_slope(const std::vector<double>& ts, const std::vector<double>& logs) {
  const std::size_t n = ts.size();
  double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    st += ts[i];
    sl += logs[i];
    stt += ts[i] * ts[i];
    stl += ts[i] * logs[i];
  }
  const double denom = n * stt - st * st;
  return denom != 0.0 ? (n * stl - st * sl) / denom : 0.0;
}

}  // namespace detail

// Spatially uniform perturbation dynamics on a constant background rho0.
// Gravitating mode:  d2(rho~)/dt2 = 4*pi*gamma*rho0*(rho0 + rho~),
// which grows like exp(sqrt(4*pi*gamma*rho0)*t) regardless of the initial
// data (the background itself sources it). Sound mode: the Fourier-mode
// oscillator d2(rho~)/dt2 + (k*q)^2*rho~ = 0, which only oscillates.
// The exponent is fitted by log-linear regression over the late-time
// window; the oscillatory mode is fitted on its conserved amplitude
// sqrt(rho~^2 + (rate/(k*q))^2) so zeros of rho~ do not poison the fit.
inline PerturbationRun perturbation_growth(double rho0, double gamma, PerturbationMode mode,
                                           double t_end, const PerturbationParams& p = {}) {
  if (!(rho0 > 0.0) || !(gamma > 0.0))
    throw Error("perturbation_growth: rho0 and gamma must be positive");
  if (!(t_end > 0.0)) throw Error("perturbation_growth: t_end must be positive");

  const double drive = 4.0 * std::numbers::pi * gamma * rho0;
  const double omega = p.sound_speed * p.wavenumber;
  const bool gravitating = (mode == PerturbationMode::Gravitating);
  auto deriv = [&](double, const std::vector<double>& y, std::vector<double>& dy) {
    dy[0] = y[1];
    dy[1] = gravitating ? drive * (rho0 + y[0]) : -omega * omega * y[0];
  };

  PerturbationRun run;
  run.mode = mode;
  std::vector<double> y = {p.amplitude0, p.rate0};
  RkOptions rk;
  rk.rtol = 1e-11;
  rk.atol = 1e-14;

  const int n_samples = std::max(p.samples, 8);
  run.times.push_back(0.0);
  run.values.push_back(y[0]);
  run.rates.push_back(y[1]);
  for (int i = 1; i <= n_samples; ++i) {
    const double t_next = t_end * i / n_samples;
    integrate_adaptive(deriv, y, run.times.back(), t_next, rk,
                       [](double, const std::vector<double>&) { return true; });
    run.times.push_back(t_next);
    run.values.push_back(y[0]);
    run.rates.push_back(y[1]);
  }

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    if (run.times[i] < 0.6 * t_end) continue;
    double amp;
    if (mode == PerturbationMode::Gravitating) {
      amp = run.values[i];
      if (!(amp > 0.0)) continue;
    } else {
      amp = std::hypot(run.values[i], run.rates[i] / omega);
      if (!(amp > 0.0)) continue;
    }
    ts.push_back(run.times[i]);
    logs.push_back(std::log(amp));
  }
  run.fitted_exponent = ts.size() >= 2 ? detail::fit_slope(ts, logs) : 0.0;
  return run;
}

}  // namespace gravgas
