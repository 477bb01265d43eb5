#pragma once

// Reference computations for the tests. Deliberately slow and simple: dense
// scans, plain bisection and direct Euclidean geometry, without reuse of
// the library's closed forms.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "olb/support_oval.hpp"

namespace oracle {

using olb::kPi;
using olb::kTwoPi;
using Vec = Eigen::Vector2d;

inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int k = 0; k < iters && hi - lo > 1e-16; ++k) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// All sign changes of f on [lo, hi] found by a uniform scan.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int nodes) {
  std::vector<double> roots;
  double x0 = lo, f0 = f(lo);
  for (int k = 1; k <= nodes; ++k) {
    const double x1 = lo + (hi - lo) * k / nodes;
    const double f1 = f(x1);
    if ((f0 < 0.0) != (f1 < 0.0)) roots.push_back(bisect(f, x0, x1));
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

/// Intersection of the lines x·n(aᵢ) = pᵢ by a 2×2 solve.
inline Vec line_meet(double a1, double p1, double a2, double p2) {
  Eigen::Matrix2d m;
  m << std::cos(a1), std::sin(a1), std::cos(a2), std::sin(a2);
  return m.colPivHouseholderQr().solve(Vec(p1, p2));
}

/// Envelope point by differentiating the support function numerically.
inline Vec envelope_point(const olb::SupportOval& oval, double a) {
  const double h = 1e-5;
  const double dp = (oval.p(a - 2 * h) - 8 * oval.p(a - h) + 8 * oval.p(a + h) - oval.p(a + 2 * h)) / (12 * h);
  return oval.p(a) * Vec(std::cos(a), std::sin(a)) + dp * Vec(-std::sin(a), std::cos(a));
}

/// Normal angles of the two tangent lines through an exterior point M,
/// ordered so that the oval is traversed counterclockwise from α₁ to α₂.
inline std::pair<double, double> tangent_angles(const olb::SupportOval& oval, const Vec& m) {
  auto g = [&](double a) { return m.x() * std::cos(a) + m.y() * std::sin(a) - oval.p(a); };
  auto roots = scan_roots(g, 0.0, kTwoPi, 8192);
  if (roots.size() != 2) return {NAN, NAN};
  // Between α₁ and α₂ (counterclockwise) M lies beyond the tangent lines: g > 0.
  const double mid = 0.5 * (roots[0] + roots[1]);
  if (g(mid) > 0.0) return {roots[0], roots[1]};
  return {roots[1], roots[0] + kTwoPi};
}

/// Next vertex by the auxiliary circle construction: the circle tangent to the
/// oval at γ(α₂) from outside and to the line of α₁; the next line is the far
/// common tangent of this circle and the oval.
inline std::optional<Vec> next_vertex(const olb::SupportOval& oval, const Vec& m) {
  const auto [a1, a2] = tangent_angles(oval, m);
  if (std::isnan(a1)) return std::nullopt;
  const Vec g2 = envelope_point(oval, a2);
  const Vec n1(std::cos(a1), std::sin(a1)), n2(std::cos(a2), std::sin(a2));
  // Centre c = g2 + r n2 with c·n1 + r = p(α₁) (circle on the far side of line 1).
  auto miss = [&](double r) { return (g2 + r * n2).dot(n1) + r - oval.p(a1); };
  const double r = bisect(miss, 1e-12, 1e6);
  const Vec c = g2 + r * n2;
  // Tangent lines of the circle with outward normal angle a: x·n(a) = c·n(a) + r.
  auto g = [&](double a) { return c.dot(Vec(std::cos(a), std::sin(a))) + r - oval.p(a); };
  const auto roots = scan_roots(g, a2 + 1e-7, a2 + kPi, 4096);
  if (roots.empty()) return std::nullopt;
  const double a3 = roots.front();
  return line_meet(a2, oval.p(a2), a3, oval.p(a3));
}

/// Five-point central difference.
inline double diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h);
}

}  // namespace oracle
