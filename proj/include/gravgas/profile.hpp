#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gravgas/errors.hpp"

namespace gravgas {

enum class InterpKind { PiecewiseLinear, PiecewiseConstant };
enum class Extrapolation { ClampToEdge, ZeroOutside };
enum class CumulativeRole { SphericalMass, PlanarG };

// One-dimensional tabulated function on strictly increasing knots.
// Immutable after construction; safe to share across threads.
class ProfileFunction {
 public:
  ProfileFunction(std::vector<double> knots, std::vector<double> values,
                  InterpKind kind = InterpKind::PiecewiseLinear,
                  Extrapolation extrap = Extrapolation::ClampToEdge)
      : knots_(std::move(knots)), values_(std::move(values)), kind_(kind), extrap_(extrap) {
    if (knots_.size() < 2 || knots_.size() != values_.size())
      throw Error("profile needs >= 2 knots with matching values");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
      if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i]))
        throw Error("profile knots/values must be finite");
      if (i > 0 && !(knots_[i] > knots_[i - 1]))
        throw Error("profile knots must be strictly increasing");
    }
  }

  static ProfileFunction constant(double value, double lo, double hi,
                                  Extrapolation extrap = Extrapolation::ClampToEdge) {
    return ProfileFunction({lo, hi}, {value, value}, InterpKind::PiecewiseConstant, extrap);
  }

  // Top-hat: value b on [-a, a], zero outside.
  static ProfileFunction uniform_slab(double b, double a) {
    return ProfileFunction({-a, a}, {b, b}, InterpKind::PiecewiseConstant,
                           Extrapolation::ZeroOutside);
  }

  static ProfileFunction zero() {
    return ProfileFunction({0.0, 1.0}, {0.0, 0.0}, InterpKind::PiecewiseConstant,
                           Extrapolation::ZeroOutside);
  }

  double operator()(double x) const { return evaluate(x); }

  double evaluate(double x) const {
    if (x < knots_.front())
      return extrap_ == Extrapolation::ClampToEdge ? values_.front() : 0.0;
    if (x > knots_.back())
      return extrap_ == Extrapolation::ClampToEdge ? values_.back() : 0.0;
    if (x == knots_.back()) return values_.back();
    const std::size_t i = segment(x);
    if (kind_ == InterpKind::PiecewiseConstant) return values_[i];
    const double w = (x - knots_[i]) / (knots_[i + 1] - knots_[i]);
    return values_[i] + w * (values_[i + 1] - values_[i]);
  }

  // Derivative of the interpolant. Right-hand derivative at knots,
  // left-hand at the last knot; zero in the extrapolation regions.
  double derivative(double x) const {
    if (x < knots_.front() || x > knots_.back()) return 0.0;
    if (kind_ == InterpKind::PiecewiseConstant) return 0.0;
    const std::size_t i = (x == knots_.back()) ? knots_.size() - 2 : segment(x);
    return (values_[i + 1] - values_[i]) / (knots_[i + 1] - knots_[i]);
  }

  // Value used when the profile appears as the density of a cumulative
  // profile's derivative: for piecewise-constant data this is the
  // right-segment value (left segment at the last knot), matching the
  // knot-derivative convention of the cumulative.
  double segment_value(double x) const {
    if (x < knots_.front())
      return extrap_ == Extrapolation::ClampToEdge ? values_.front() : 0.0;
    if (x > knots_.back())
      return extrap_ == Extrapolation::ClampToEdge ? values_.back() : 0.0;
    if (kind_ == InterpKind::PiecewiseLinear) return evaluate(x);
    const std::size_t i = (x == knots_.back()) ? knots_.size() - 2 : segment(x);
    return values_[i];
  }

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  InterpKind kind() const { return kind_; }
  Extrapolation extrapolation() const { return extrap_; }

  bool all_nonnegative() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0; });
  }

 private:
  // Index i with knots[i] <= x < knots[i+1] (x strictly inside the range).
  std::size_t segment(double x) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    if (i == 0) return 0;
    if (i >= knots_.size()) return knots_.size() - 2;
    return i - 1;
  }

  std::vector<double> knots_;
  std::vector<double> values_;
  InterpKind kind_;
  Extrapolation extrap_;
};

namespace detail {

// Integral of the interpolated density over [x0, x1] within one segment,
// with weight r^2 (spherical) or 1 (planar). Closed form, no quadrature.
inline double segment_integral(double x0, double x1, double v0, double v1, double k0, double k1,
                               InterpKind kind, bool spherical_weight) {
  if (x1 <= x0) return 0.0;
  if (kind == InterpKind::PiecewiseConstant) {
    if (spherical_weight) return v0 * (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
    return v0 * (x1 - x0);
  }
  const double slope = (v1 - v0) / (k1 - k0);
  const double a = v0 - slope * k0;  // rho(r) = a + slope*r
  if (spherical_weight) {
    const double cub = (x1 * x1 * x1 - x0 * x0 * x0) / 3.0;
    const double quart = (x1 * x1 * x1 * x1 - x0 * x0 * x0 * x0) / 4.0;
    return a * cub + slope * quart;
  }
  const double lin = x1 - x0;
  const double quad = (x1 * x1 - x0 * x0) / 2.0;
  return a * lin + slope * quad;
}

}  // namespace detail

// Exact cumulative integral of a density profile, evaluated in closed form
// from the interpolant (role decides the weight and the offset convention).
class CumulativeProfile {
 public:
  CumulativeProfile(ProfileFunction base, CumulativeRole role)
      : base_(std::move(base)), role_(role) {
    if (!base_.all_nonnegative()) throw NegativeDensity("density profile has negative values");
    const bool spherical = role_ == CumulativeRole::SphericalMass;
    if (spherical && base_.knots().front() < 0.0)
      throw Error("spherical density profile must live on r >= 0");
    if (!spherical && base_.extrapolation() == Extrapolation::ClampToEdge &&
        (base_.values().front() != 0.0 || base_.values().back() != 0.0))
      throw NonIntegrable("planar density with clamped nonzero edge has infinite mass");

    const auto& k = base_.knots();
    const auto& v = base_.values();
    cum_.resize(k.size());
    // Leading extrapolation region: [0, k0] for spherical, nothing for
    // planar (zero-outside is enforced above for the clamp case).
    double lead = 0.0;
    if (spherical && k.front() > 0.0 && base_.extrapolation() == Extrapolation::ClampToEdge)
      lead = v.front() * k.front() * k.front() * k.front() / 3.0;
    cum_[0] = lead;
    for (std::size_t i = 0; i + 1 < k.size(); ++i)
      cum_[i + 1] = cum_[i] + detail::segment_integral(k[i], k[i + 1], v[i], v[i + 1], k[i],
                                                       k[i + 1], base_.kind(), spherical);
    total_ = cum_.back();
  }

  CumulativeRole role() const { return role_; }
  const ProfileFunction& base() const { return base_; }

  // Total integrated mass over the support (spherical: out to the last
  // knot; planar: total line mass).
  double total_mass() const { return total_; }

  // Cumulative value at x. Spherical role: integral of r^2 rho from 0.
  // Planar role: half the mass below minus half the mass above.
  double value(double x) const {
    const bool spherical = role_ == CumulativeRole::SphericalMass;
    const auto& k = base_.knots();
    const auto& v = base_.values();
    double raw;
    if (x <= k.front()) {
      raw = 0.0;
      if (spherical) {
        const double xc = std::max(x, 0.0);
        if (base_.extrapolation() == Extrapolation::ClampToEdge)
          raw = v.front() * xc * xc * xc / 3.0;
      }
    } else if (x >= k.back()) {
      raw = cum_.back();
      if (base_.extrapolation() == Extrapolation::ClampToEdge && spherical)
        raw += v.back() * (x * x * x - k.back() * k.back() * k.back()) / 3.0;
    } else {
      auto it = std::upper_bound(k.begin(), k.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - k.begin()) - 1;
      raw = cum_[i] + detail::segment_integral(k[i], x, v[i], v[i + 1], k[i], k[i + 1],
                                               base_.kind(), spherical);
    }
    if (spherical) return raw;
    return raw - 0.5 * total_;
  }

  double operator()(double x) const { return value(x); }

  // Derivative of the exact cumulative: x^2 rho(x) (spherical) or rho(x)
  // (planar), with the one-sided knot convention from ProfileFunction.
  double derivative(double x) const {
    const bool spherical = role_ == CumulativeRole::SphericalMass;
    double rho;
    if (spherical && x < base_.knots().front()) {
      rho = base_.extrapolation() == Extrapolation::ClampToEdge ? base_.values().front() : 0.0;
    } else {
      rho = base_.segment_value(x);
    }
    return spherical ? x * x * rho : rho;
  }

 private:
  ProfileFunction base_;
  std::vector<double> cum_;
  CumulativeRole role_;
  double total_;
};

// m(r) = integral_0^r r'^2 rho(r') dr'.
inline CumulativeProfile cumulative_mass(const ProfileFunction& rho0) {
  return CumulativeProfile(rho0, CumulativeRole::SphericalMass);
}

// g(x) = (mass below x - mass above x) / 2; limits are -M/2 and +M/2.
inline CumulativeProfile planar_g(const ProfileFunction& rho0) {
  return CumulativeProfile(rho0, CumulativeRole::PlanarG);
}

}  // namespace gravgas
