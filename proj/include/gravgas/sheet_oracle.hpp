#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "gravgas/errors.hpp"

namespace gravgas {

// Planar sheets of equal surface mass. Between crossings every sheet has
// the constant acceleration -2*pi*gamma*mu*(2*rank - N + 1), so the
// dynamics are piecewise quadratic and can be integrated exactly,
// event by event.
struct SheetSystem {
  std::vector<double> positions;   // strictly increasing
  std::vector<double> velocities;
  double mass = 1.0;               // per-sheet mass mu
  double gamma = 1.0;

  std::size_t size() const { return positions.size(); }

  // Equal-mass sampling of the uniform slab: sheet k sits at the midpoint
  // of its mass quantile, so its discrete g matches b*x exactly.
  static SheetSystem uniform_slab(double b, double a, double gamma, int n) {
    SheetSystem s;
    s.gamma = gamma;
    s.mass = 2.0 * a * b / n;
    for (int k = 0; k < n; ++k) {
      s.positions.push_back(-a + (k + 0.5) * 2.0 * a / n);
      s.velocities.push_back(0.0);
    }
    return s;
  }
};

struct SheetEvent {
  double time;
  std::size_t lower_rank;  // rank of the lower sheet of the swapped pair
  bool degenerate;         // part of a simultaneous multi-sheet collision
};

// Event-driven exact integrator. Positions are kept rank-sorted; a
// crossing swaps the two force assignments and integration continues, so
// arbitrarily many bounces are handled without discretization error.
class SheetSimulator {
 public:
  explicit SheetSimulator(SheetSystem init) : state_(std::move(init)) {
    const std::size_t n = state_.size();
    if (n == 0) throw Error("SheetSimulator: empty system");
    for (std::size_t k = 1; k < n; ++k)
      if (!(state_.positions[k] > state_.positions[k - 1]))
        throw Error("SheetSimulator: positions must be strictly ordered");
  }

  double time() const { return t_; }
  const SheetSystem& state() const { return state_; }
  const std::vector<SheetEvent>& events() const { return events_; }

  double acceleration(std::size_t rank) const {
    const double n = static_cast<double>(state_.size());
    return -2.0 * std::numbers::pi * state_.gamma * state_.mass *
           (2.0 * static_cast<double>(rank) - n + 1.0);
  }

  void advance_to(double t_end) {
    while (t_ < t_end) {
      std::size_t pair;
      const double t_cross = next_crossing(pair);
      if (t_cross >= t_end) {
        drift(t_end - t_);
        t_ = t_end;
        return;
      }
      drift(t_cross - t_);
      const bool degen = !events_.empty() && events_.back().time == t_cross;
      t_ = t_cross;
      // Swap the pair: equal positions, exchanged ranks (and therefore
      // exchanged accelerations); velocities ride through unchanged.
      std::swap(state_.positions[pair], state_.positions[pair + 1]);
      std::swap(state_.velocities[pair], state_.velocities[pair + 1]);
      events_.push_back({t_cross, pair, degen});
      if (degen && !events_.empty()) events_[events_.size() - 2].degenerate = true;
    }
  }

  double total_momentum() const {
    double p = 0.0;
    for (double u : state_.velocities) p += u;
    return state_.mass * p;
  }

 private:
  void drift(double dt) {
    for (std::size_t k = 0; k < state_.size(); ++k) {
      const double a = acceleration(k);
      state_.positions[k] += state_.velocities[k] * dt + 0.5 * a * dt * dt;
      state_.velocities[k] += a * dt;
    }
  }

  // Earliest future crossing among adjacent pairs. Relative gap obeys
  // gap(tau) = dx + dv*tau - 2*pi*gamma*mu*tau^2 with dx >= 0, so a root
  // always exists; tau = (dv + sqrt(dv^2 + 8*pi*gamma*mu*dx))/(4*pi*gamma*mu).
  double next_crossing(std::size_t& pair) const {
    const double k4 = 4.0 * std::numbers::pi * state_.gamma * state_.mass;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k + 1 < state_.size(); ++k) {
      const double dx = state_.positions[k + 1] - state_.positions[k];
      const double dv = state_.velocities[k + 1] - state_.velocities[k];
      double tau;
      if (k4 > 0.0) {
        tau = (dv + std::sqrt(dv * dv + 2.0 * k4 * dx)) / k4;
      } else {
        if (dv >= 0.0) continue;  // massless or zero-gamma: pure drift
        tau = -dx / dv;
      }
      if (tau <= 0.0 && dv >= 0.0) continue;  // just swapped, now separating
      if (tau < 0.0) tau = 0.0;
      const double t_abs = t_ + tau;
      if (t_abs < best) {
        best = t_abs;
        pair = k;
      }
    }
    return best;
  }

  SheetSystem state_;
  double t_ = 0.0;
  std::vector<SheetEvent> events_;
};

// One-call variant: evolve a copy to t_end and return it together with
// the crossing events seen on the way.
struct SheetRun {
  SheetSystem state;
  std::vector<SheetEvent> events;
};

inline SheetRun sheet_integrate(const SheetSystem& init, double t_end) {
  SheetSimulator sim(init);
  sim.advance_to(t_end);
  return {sim.state(), sim.events()};
}

}  // namespace gravgas
