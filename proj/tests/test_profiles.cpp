#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gravgas/profile.hpp"

using namespace gravgas;

TEST_CASE("piecewise-linear evaluation") {
  ProfileFunction p({0.0, 1.0}, {1.0, 3.0});
  CHECK(p(0.5) == 2.0);
  CHECK(p(0.0) == 1.0);
  CHECK(p(1.0) == 3.0);

  ProfileFunction q({0.0, 2.0}, {0.0, 4.0});
  CHECK(q(1.5) == 3.0);
}

TEST_CASE("piecewise-constant with zero-outside extrapolation") {
  ProfileFunction p = ProfileFunction::uniform_slab(1.0, 1.0);
  CHECK(p(2.0) == 0.0);
  CHECK(p(-2.0) == 0.0);
  CHECK(p(0.0) == 1.0);
  CHECK(p(1.0) == 1.0);   // exact at knots
  CHECK(p(-1.0) == 1.0);
}

TEST_CASE("clamp extrapolation holds edge values") {
  ProfileFunction p({0.0, 1.0}, {2.0, 5.0}, InterpKind::PiecewiseLinear,
                    Extrapolation::ClampToEdge);
  CHECK(p(-1.0) == 2.0);
  CHECK(p(3.0) == 5.0);
}

TEST_CASE("construction rejects bad knot tables") {
  CHECK_THROWS_AS(ProfileFunction({1.0, 1.0}, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(ProfileFunction({2.0, 1.0}, {0.0, 0.0}), Error);
  CHECK_THROWS_AS(ProfileFunction({0.0}, {0.0}), Error);
  CHECK_THROWS_AS(ProfileFunction({0.0, 1.0}, {0.0, std::nan("")}), Error);
}

TEST_CASE("cumulative_mass of a constant density is rho0*r^3/3") {
  const double rho0 = 0.7;
  ProfileFunction p = ProfileFunction::constant(rho0, 0.0, 2.0);
  CumulativeProfile m = cumulative_mass(p);
  for (double r : {0.0, 0.3, 1.0, 1.7, 2.0})
    CHECK(m.value(r) == Catch::Approx(rho0 * r * r * r / 3.0).epsilon(1e-14));
  // clamp extrapolation keeps accumulating beyond the last knot
  CHECK(m.value(3.0) == Catch::Approx(rho0 * 9.0).epsilon(1e-14));
}

TEST_CASE("cumulative_mass of zero density is zero") {
  CumulativeProfile m = cumulative_mass(ProfileFunction::zero());
  CHECK(m.value(0.5) == 0.0);
  CHECK(m.value(10.0) == 0.0);
}

TEST_CASE("cumulative_mass of a finite-support top hat saturates") {
  // rho = 1 on [0, 1], zero beyond: m(2) = 1/3, cross-checked below by a
  // fine Riemann sum.
  ProfileFunction p({0.0, 1.0}, {1.0, 1.0}, InterpKind::PiecewiseConstant,
                    Extrapolation::ZeroOutside);
  CumulativeProfile m = cumulative_mass(p);
  CHECK(m.value(2.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-14));

  const int n = 200000;
  double riemann = 0.0;
  for (int i = 0; i < n; ++i) {
    const double r = 2.0 * (i + 0.5) / n;
    riemann += r * r * p(r) * (2.0 / n);
  }
  CHECK(m.value(2.0) == Catch::Approx(riemann).epsilon(1e-6));
}

TEST_CASE("cumulative_mass rejects negative density") {
  ProfileFunction p({0.0, 1.0}, {1.0, -0.5});
  CHECK_THROWS_AS(cumulative_mass(p), NegativeDensity);
}

TEST_CASE("planar_g of the uniform slab is linear inside") {
  ProfileFunction p = ProfileFunction::uniform_slab(1.0, 1.0);
  CumulativeProfile g = planar_g(p);
  CHECK(g.value(0.0) == 0.0);
  CHECK(g.value(0.5) == Catch::Approx(0.5).epsilon(1e-14));
  CHECK(g.value(-0.5) == Catch::Approx(-0.5).epsilon(1e-14));
  CHECK(g.value(1.0) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(g.value(100.0) == Catch::Approx(1.0).epsilon(1e-14));   // +M/2
  CHECK(g.value(-100.0) == Catch::Approx(-1.0).epsilon(1e-14)); // -M/2
  CHECK(g.total_mass() == Catch::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("planar_g of zero density vanishes") {
  CumulativeProfile g = planar_g(ProfileFunction::zero());
  CHECK(g.value(-3.0) == 0.0);
  CHECK(g.value(3.0) == 0.0);
}

TEST_CASE("planar_g rejects non-integrable clamped densities") {
  ProfileFunction p({-1.0, 1.0}, {1.0, 1.0}, InterpKind::PiecewiseConstant,
                    Extrapolation::ClampToEdge);
  CHECK_THROWS_AS(planar_g(p), NonIntegrable);
}

TEST_CASE("derivative conventions") {
  SECTION("spherical: constant density round trip") {
    const double rho0 = 0.4;
    CumulativeProfile m = cumulative_mass(ProfileFunction::constant(rho0, 0.0, 2.0));
    const double r = 1.0;
    CHECK(m.derivative(r) / (r * r) == Catch::Approx(rho0).epsilon(1e-14));
  }
  SECTION("planar slab: derivative at the center is the density") {
    CumulativeProfile g = planar_g(ProfileFunction::uniform_slab(1.0, 1.0));
    CHECK(g.derivative(0.0) == 1.0);
    // finite-difference cross-check of the planar_g output
    const double h = 1e-6;
    CHECK((g.value(h) - g.value(-h)) / (2.0 * h) == Catch::Approx(1.0).epsilon(1e-9));
  }
  SECTION("zero-outside extrapolation region has zero derivative") {
    CumulativeProfile g = planar_g(ProfileFunction::uniform_slab(1.0, 1.0));
    CHECK(g.derivative(5.0) == 0.0);
    CHECK(g.derivative(-5.0) == 0.0);
  }
  SECTION("piecewise-linear profile derivative is the segment slope") {
    ProfileFunction p({0.0, 1.0, 2.0}, {0.0, 1.0, 3.0});
    CHECK(p.derivative(0.5) == 1.0);
    CHECK(p.derivative(1.0) == 2.0);  // right-hand at interior knot
    CHECK(p.derivative(2.0) == 2.0);  // left-hand at the last knot
    CHECK(p.derivative(5.0) == 0.0);
  }
}

TEST_CASE("round trip density -> mass -> density at interior knots") {
  ProfileFunction rho({0.0, 0.5, 1.0, 2.0}, {1.0, 0.25, 0.5, 0.5},
                      InterpKind::PiecewiseConstant, Extrapolation::ZeroOutside);
  CumulativeProfile m = cumulative_mass(rho);
  for (double r : {0.25, 0.5, 0.75, 1.0, 1.5}) {
    const double back = m.derivative(r) / (r * r);
    CHECK(back == Catch::Approx(rho.segment_value(r)).epsilon(1e-12));
  }
}

TEST_CASE("planar_g is monotone nondecreasing for random nonnegative densities") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> uval(0.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> knots, values;
    double x = -2.0;
    const int nk = 4 + static_cast<int>(rng() % 5);
    for (int i = 0; i < nk; ++i) {
      knots.push_back(x);
      values.push_back(uval(rng));
      x += 0.2 + uval(rng) / 3.0;
    }
    values.front() = 0.0;
    values.back() = 0.0;
    const InterpKind kind =
        (trial % 2 == 0) ? InterpKind::PiecewiseLinear : InterpKind::PiecewiseConstant;
    CumulativeProfile g = planar_g(ProfileFunction(knots, values, kind,
                                                   Extrapolation::ZeroOutside));
    double prev = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 100; ++i) {
      const double xi = -3.0 + 8.0 * i / 100.0;
      const double gi = g.value(xi);
      CHECK(gi >= prev - 1e-15);
      prev = gi;
    }
  }
}

TEST_CASE("planar_g is antisymmetric for even densities") {
  ProfileFunction rho({-1.0, -0.5, 0.5, 1.0}, {0.0, 2.0, 2.0, 0.0},
                      InterpKind::PiecewiseLinear, Extrapolation::ZeroOutside);
  CumulativeProfile g = planar_g(rho);
  CHECK(std::abs(g.value(0.0)) < 1e-15);
  for (double x : {0.3, 0.7, 1.5})
    CHECK(g.value(x) == Catch::Approx(-g.value(-x)).margin(1e-14));
}

TEST_CASE("cumulative_mass is additive over disjoint supports") {
  ProfileFunction a({0.0, 1.0}, {1.0, 1.0}, InterpKind::PiecewiseConstant,
                    Extrapolation::ZeroOutside);
  ProfileFunction b({2.0, 3.0}, {0.5, 0.5}, InterpKind::PiecewiseConstant,
                    Extrapolation::ZeroOutside);
  ProfileFunction sum({0.0, 1.0, 2.0, 3.0}, {1.0, 0.0, 0.5, 0.5},
                      InterpKind::PiecewiseConstant, Extrapolation::ZeroOutside);
  CumulativeProfile ma = cumulative_mass(a), mb = cumulative_mass(b),
                    ms = cumulative_mass(sum);
  for (double r : {0.5, 1.0, 1.7, 2.5, 3.0, 4.0})
    CHECK(ms.value(r) == Catch::Approx(ma.value(r) + mb.value(r)).epsilon(1e-14));
}
