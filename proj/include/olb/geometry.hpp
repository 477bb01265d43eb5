#pragma once

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "olb/errors.hpp"

namespace olb {

using PlanePoint = Eigen::Vector2d;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Outward unit normal (cos α, sin α).
inline PlanePoint unit_normal(double alpha) { return {std::cos(alpha), std::sin(alpha)}; }

/// Counterclockwise unit tangent (−sin α, cos α).
inline PlanePoint unit_tangent(double alpha) { return {-std::sin(alpha), std::cos(alpha)}; }

/// Determinant [u, v] = u_x v_y − u_y v_x.
inline double cross(const PlanePoint& u, const PlanePoint& v) { return u.x() * v.y() - u.y() * v.x(); }

/// Reduce an angle to [0, 2π).
inline double wrap_angle(double alpha) {
  double r = std::fmod(alpha, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// Signed angular distance a − b reduced to (−π, π].
inline double angle_diff(double a, double b) {
  double d = wrap_angle(a - b);
  return d > kPi ? d - kTwoPi : d;
}

/// Intersection of the lines x cos α₁ + y sin α₁ = p₁ and x cos α₂ + y sin α₂ = p₂.
inline PlanePoint support_lines_intersection(double alpha1, double p1, double alpha2, double p2) {
  const double s = std::sin(alpha2 - alpha1);
  if (std::abs(s) < 1e-14) throw DomainError("support lines are parallel");
  return PlanePoint{p1 * std::sin(alpha2) - p2 * std::sin(alpha1),
                    p2 * std::cos(alpha1) - p1 * std::cos(alpha2)} /
         s;
}

}  // namespace olb
