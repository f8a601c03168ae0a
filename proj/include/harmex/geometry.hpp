#ifndef HARMEX_GEOMETRY_HPP
#define HARMEX_GEOMETRY_HPP

#include <cmath>
#include <stdexcept>

namespace harmex {

/// A radius r in [0, 1) carried together with its gap 1 - r.
///
/// Grids that cluster at the boundary go down to gaps like 2^-80, which a
/// plain double r cannot resolve; everything that blows up at the boundary
/// reads the gap instead of recomputing 1 - r.
struct Radius {
  double value = 0.0;
  double gap = 1.0;

  static Radius from_value(double r) {
    if (!(r >= 0.0 && r < 1.0)) throw std::domain_error("radius must lie in [0, 1)");
    return {r, 1.0 - r};
  }
  static Radius from_gap(double gap) {
    if (!(gap > 0.0 && gap <= 1.0)) throw std::domain_error("gap must lie in (0, 1]");
    return {1.0 - gap, gap};
  }
};

/// Product radius t * rho with an accurate gap, 1 - t rho = (1 - t) + t (1 - rho).
inline Radius scaled(const Radius& a, const Radius& b) {
  return {a.value * b.value, a.gap + a.value * b.gap};
}

/// Angle to the pole with the cosine and versine 1 - cos(theta) = 2 sin^2(theta/2).
struct Angle {
  double theta = 0.0;
  double cos = 1.0;
  double versine = 0.0;

  static Angle from_theta(double theta) {
    const double h = std::sin(0.5 * theta);
    return {theta, std::cos(theta), 2.0 * h * h};
  }
  static Angle from_cosine(double s) {
    if (!(s >= -1.0 && s <= 1.0)) throw std::domain_error("cosine must lie in [-1, 1]");
    return {std::acos(s), s, 1.0 - s};
  }
};

}  // namespace harmex

#endif  // HARMEX_GEOMETRY_HPP
