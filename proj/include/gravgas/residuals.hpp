#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "gravgas/errors.hpp"
#include "gravgas/snapshot.hpp"

namespace gravgas {

enum class Geometry { Spherical, Planar };

struct ResidualNorms {
  double continuity_max = 0.0;
  double continuity_l2 = 0.0;
  double momentum_max = 0.0;
  double momentum_l2 = 0.0;
};

// Discrete residuals of the continuity and momentum equations between two
// snapshots on the same grid: forward difference in time, central
// differences in space, fields taken at the earlier time. First order in
// dt by construction.
//   spherical: d/dt(r^2 rho) + d/dr(r^2 rho v) = 0,
//              dv/dt + v dv/dr + 4*pi*gamma*m/r^2 = 0
//   planar:    d/dt(rho) + d/dx(rho v) = 0,
//              dv/dt + v dv/dx + 4*pi*gamma*g = 0
inline ResidualNorms residual_check(const FieldSnapshot& a, const FieldSnapshot& b, Geometry geom,
                                    double gamma) {
  const std::size_t n = a.size();
  if (b.size() != n || n < 3) throw GridMismatch("residual_check: grid sizes differ or too small");
  for (std::size_t i = 0; i < n; ++i)
    if (a.coord[i] != b.coord[i]) throw GridMismatch("residual_check: grids differ");
  const double dt = b.t - a.t;
  if (!(dt > 0.0)) throw Error("residual_check: snapshots must be time-ordered");

  const bool spherical = geom == Geometry::Spherical;
  auto weighted_rho = [&](const FieldSnapshot& s, std::size_t i) {
    return spherical ? s.coord[i] * s.coord[i] * s.density[i] : s.density[i];
  };

  ResidualNorms out;
  double c_sq = 0.0, m_sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double dx = a.coord[i + 1] - a.coord[i - 1];
    const double flux_hi = weighted_rho(a, i + 1) * a.velocity[i + 1];
    const double flux_lo = weighted_rho(a, i - 1) * a.velocity[i - 1];
    const double cont = (weighted_rho(b, i) - weighted_rho(a, i)) / dt + (flux_hi - flux_lo) / dx;

    const double dvdx = (a.velocity[i + 1] - a.velocity[i - 1]) / dx;
    double force;
    if (spherical)
      force = 4.0 * std::numbers::pi * gamma * a.cumulative[i] / (a.coord[i] * a.coord[i]);
    else
      force = 4.0 * std::numbers::pi * gamma * a.cumulative[i];
    const double mom = (b.velocity[i] - a.velocity[i]) / dt + a.velocity[i] * dvdx + force;

    out.continuity_max = std::max(out.continuity_max, std::abs(cont));
    out.momentum_max = std::max(out.momentum_max, std::abs(mom));
    c_sq += cont * cont;
    m_sq += mom * mom;
    ++count;
  }
  out.continuity_l2 = std::sqrt(c_sq / count);
  out.momentum_l2 = std::sqrt(m_sq / count);
  return out;
}

}  // namespace gravgas
