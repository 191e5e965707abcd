#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "gravgas/kepler.hpp"
#include "gravgas/perturbation.hpp"
#include "gravgas/sheet_oracle.hpp"
#include "gravgas/shell_oracle.hpp"

using namespace gravgas;
using std::numbers::pi;

namespace {
const double kRho0 = 3.0 / (8.0 * pi);  // unit angular frequency at gamma = 1
}

TEST_CASE("single shell follows the cycloid solution") {
  // m(f) = rho0*f^3/3 gives every shell the angular frequency 1, so the
  // trajectory is r = f*(1 + cos(alpha))/2 with alpha + sin(alpha) = -2t.
  auto mass = [](double f) { return kRho0 * f * f * f / 3.0; };
  ShellOracleOptions opts;
  opts.sample_times = {0.2, 0.5, 1.0, 1.4};
  const auto traj = shell_integrate(ShellSystem::cold(1, 1.0, 1.0, mass), 1.45, opts);
  REQUIRE(traj.times.size() == 4);
  REQUIRE(traj.events.empty());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    const double alpha = kepler_solve(-2.0 * t, 1e-14);
    const double u = 1.0 + std::cos(alpha);
    CHECK(traj.radii[i][0] == Catch::Approx(u / 2.0).epsilon(1e-9));
    // dr/dt = sin(alpha)/(1 + cos(alpha)) on the unit-frequency cycloid
    CHECK(traj.velocities[i][0] == Catch::Approx(std::sin(alpha) / u).epsilon(1e-8));
  }
}

TEST_CASE("homogeneous shells collapse together at pi/2") {
  auto mass = [](double f) { return kRho0 * f * f * f / 3.0; };
  const auto traj = shell_integrate(ShellSystem::cold(16, 1.0, 1.0, mass), 2.0);
  REQUIRE(!traj.events.empty());
  CHECK(traj.events.front().type == ShellEvent::Type::Collapse);
  CHECK(traj.events.front().time == Catch::Approx(pi / 2.0).margin(1e-4));
  CHECK(traj.end_time == traj.events.front().time);
}

TEST_CASE("per-shell energy is conserved") {
  auto mass = [](double f) { return kRho0 * f * f * f / 3.0; };
  ShellOracleOptions opts;
  opts.sample_times = {0.0, 0.4, 0.9, 1.3};
  const auto sys = ShellSystem::cold(8, 1.0, 1.0, mass);
  const auto traj = shell_integrate(sys, 1.35, opts);
  REQUIRE(traj.times.size() == 4);
  for (std::size_t j = 0; j < sys.size(); ++j) {
    const double e0 = -4.0 * pi * sys.masses[j] / sys.labels[j];
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double v = traj.velocities[i][j];
      const double e = 0.5 * v * v - 4.0 * pi * sys.masses[j] / traj.radii[i][j];
      CHECK(std::abs(e - e0) < 1e-8 * std::abs(e0));
    }
  }
}

TEST_CASE("a heavy outer shell overtakes a light inner one") {
  ShellSystem sys;
  sys.gamma = 1.0;
  sys.labels = {1.0, 1.1};
  sys.masses = {0.001, 0.5};
  sys.radii = sys.labels;
  sys.velocities = {0.0, 0.0};
  const auto traj = shell_integrate(sys, 2.0);
  REQUIRE(!traj.events.empty());
  CHECK(traj.events.front().type == ShellEvent::Type::Crossing);
  CHECK(traj.events.front().index == 0);
  CHECK(traj.end_time > 0.0);
  CHECK(traj.end_time < 1.0);
  // before the event the run is clean
  const auto early = shell_integrate(sys, 0.5 * traj.end_time);
  CHECK(early.events.empty());
}

TEST_CASE("shell system validation") {
  ShellSystem bad;
  CHECK_THROWS_AS(shell_integrate(bad, 1.0), Error);
  bad.labels = {1.0, 0.5};
  bad.masses = {0.1, 0.2};
  bad.radii = bad.labels;
  bad.velocities = {0.0, 0.0};
  CHECK_THROWS_AS(shell_integrate(bad, 1.0), Error);
}

TEST_CASE("two symmetric sheets meet at the exact ballistic time") {
  // Each sheet feels a = 2*pi*gamma*mu toward the other, so they meet
  // after t = sqrt(d / (pi*gamma*mu)) having each covered d = a*t^2/2.
  SheetSystem sys;
  sys.gamma = 1.0 / (2.0 * pi);
  sys.mass = 1.0;  // a = 2*pi*gamma*mu = 1
  sys.positions = {-0.5, 0.5};
  sys.velocities = {0.0, 0.0};

  SheetSimulator sim(sys);
  sim.advance_to(0.999);
  CHECK(sim.events().empty());
  sim.advance_to(1.001);
  REQUIRE(sim.events().size() == 1);
  CHECK(sim.events()[0].time == Catch::Approx(1.0).margin(1e-12));
  CHECK(sim.events()[0].lower_rank == 0);

  // After the pass-through the pair decelerates symmetrically and is back
  // at the initial state at t = 2: the motion is periodic.
  sim.advance_to(2.0);
  CHECK(sim.state().positions[0] == Catch::Approx(-0.5).margin(1e-12));
  CHECK(sim.state().positions[1] == Catch::Approx(0.5).margin(1e-12));
  CHECK(sim.state().velocities[0] == Catch::Approx(0.0).margin(1e-12));
  CHECK(sim.state().velocities[1] == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("uniform slab sheets contract self-similarly before collapse") {
  const double gamma = 1.0 / (2.0 * pi);
  const int n = 100;
  const auto init = SheetSystem::uniform_slab(1.0, 1.0, gamma, n);
  auto run = sheet_integrate(init, 0.5);
  CHECK(run.events.empty());
  // With this gamma x_k(t) = x_k(0)*(1 - t^2) and v_k(t) = -2*t*x_k(0),
  // exact for the quantile-midpoint sampling, so at t = 1/2 every sheet
  // sits at 0.75*x0 with velocity -x0.
  for (int k = 0; k < n; ++k) {
    const double x0 = init.positions[static_cast<std::size_t>(k)];
    CHECK(run.state.positions[static_cast<std::size_t>(k)] ==
          Catch::Approx(0.75 * x0).margin(1e-13));
    CHECK(run.state.velocities[static_cast<std::size_t>(k)] ==
          Catch::Approx(-x0).margin(1e-13));
  }
}

TEST_CASE("sheet momentum is conserved through many crossings") {
  SheetSystem sys;
  sys.gamma = 0.2;
  sys.mass = 0.3;
  sys.positions = {-1.0, -0.3, 0.1, 0.4, 1.2};
  sys.velocities = {0.8, -0.5, 0.3, -0.9, 0.1};
  SheetSimulator sim(sys);
  const double p0 = sim.total_momentum();
  sim.advance_to(20.0);
  CHECK(sim.events().size() > 10);
  CHECK(std::abs(sim.total_momentum() - p0) < 1e-14);
  // rank order is an invariant of the swap bookkeeping
  for (std::size_t k = 1; k < sim.state().size(); ++k)
    CHECK(sim.state().positions[k] >= sim.state().positions[k - 1]);
}

TEST_CASE("sheet system validation") {
  SheetSystem bad;
  CHECK_THROWS_AS(SheetSimulator(bad), Error);
  bad.positions = {0.5, 0.5};
  bad.velocities = {0.0, 0.0};
  CHECK_THROWS_AS(SheetSimulator(bad), Error);
}

TEST_CASE("uniform background drives exponential growth") {
  // rho0 = 1/(4*pi), gamma = 1 puts the growth rate at exactly 1.
  const auto run = perturbation_growth(1.0 / (4.0 * pi), 1.0, PerturbationMode::Gravitating, 8.0);
  CHECK(run.fitted_exponent == Catch::Approx(1.0).epsilon(0.01));
  CHECK(run.values.back() > run.values.front());
}

TEST_CASE("sound mode only oscillates") {
  PerturbationParams p;
  p.sound_speed = 1.3;
  p.wavenumber = 2.0;
  const auto run =
      perturbation_growth(1.0 / (4.0 * pi), 1.0, PerturbationMode::Sound, 8.0, p);
  CHECK(std::abs(run.fitted_exponent) < 1e-3);
  // the signal itself crosses zero
  bool sign_change = false;
  for (std::size_t i = 1; i < run.values.size(); ++i)
    if (run.values[i] * run.values[i - 1] < 0.0) sign_change = true;
  CHECK(sign_change);
}

TEST_CASE("perturbation argument validation") {
  CHECK_THROWS_AS(perturbation_growth(0.0, 1.0, PerturbationMode::Gravitating, 1.0), Error);
  CHECK_THROWS_AS(perturbation_growth(1.0, -1.0, PerturbationMode::Gravitating, 1.0), Error);
  CHECK_THROWS_AS(perturbation_growth(1.0, 1.0, PerturbationMode::Sound, 0.0), Error);
}
