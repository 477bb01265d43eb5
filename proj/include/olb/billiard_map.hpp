#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "olb/errors.hpp"
#include "olb/genfun.hpp"
#include "olb/geometry.hpp"
#include "olb/numeric.hpp"
#include "olb/support_oval.hpp"

namespace olb {

using LinePairState = ChordConfig;

/// Phase-cylinder coordinates: base angle α = α₁ and R = R₁(α₁, α₂).
struct PhasePoint {
  double alpha = 0.0;
  double R = 0.0;
};

namespace detail {

/// The unique α₃ ∈ (α₂, α₂ + π) with R₁(α₂, α₃) = target.
inline double solve_forward_angle(const SupportOval& oval, double a2, double target) {
  auto f = [&](double a3) { return radii(oval, {a2, a3}).first - target; };
  auto df = [&](double a3) { return -hess_S(oval, {a2, a3}).S12; };
  // Slightly inside the chord domain so that rounding of a2 + gap never leaves it.
  const double inset = kMinGap * (1.0 + 1e-9);
  const double lo = a2 + inset, hi = a2 + kPi - inset;
  constexpr int kNodes = 64;
  double prev = lo;
  double fprev = f(lo);
  if (fprev == 0.0) return lo;
  if (fprev > 0.0) throw StepFailure("no forward tangent line: residual positive at the lower bracket end");
  for (int k = 1; k <= kNodes; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / kNodes;
    const double fx = f(x);
    if (fx >= 0.0) return numeric::bracketed_root(f, df, prev, x, {1e-15, 200, 2});
    prev = x;
    fprev = fx;
  }
  throw StepFailure("no forward tangent line within (α₂, α₂ + π)");
}

}  // namespace detail

/// T(α₁, α₂) = (α₂, α₃) with R₂(α₁, α₂) = R₁(α₂, α₃).
inline LinePairState step(const SupportOval& oval, const LinePairState& s) {
  const double target = radii(oval, s).second;
  return {s.alpha2, detail::solve_forward_angle(oval, s.alpha2, target)};
}

/// Intersection of the two tangent lines of a state.
inline PlanePoint vertex(const SupportOval& oval, const LinePairState& s) {
  return support_lines_intersection(s.alpha1, oval.p(s.alpha1), s.alpha2, oval.p(s.alpha2));
}

inline LinePairState state_from_point(const SupportOval& oval, const PlanePoint& m) {
  const auto [a1, a2] = oval.tangent_angles_from(m);
  return {a1, a2};
}

/// Geometric construction of T on exterior points: the circle tangent to the
/// oval at γ(α₂) and to the first tangent line, then the far common tangent of
/// that circle and the oval.
inline PlanePoint cartesian_step(const SupportOval& oval, const PlanePoint& m) {
  const auto [a1, a2] = oval.tangent_angles_from(m);
  const PlanePoint n1 = unit_normal(a1), n2 = unit_normal(a2);
  const PlanePoint g2 = oval.point_at(a2);
  const double h1 = oval.p(a1);
  const double r = (h1 - g2.dot(n1)) / (1.0 + n1.dot(n2));
  if (!(r > 0.0)) throw StepFailure("auxiliary circle degenerate");
  const PlanePoint center = g2 + r * n2;
  auto f = [&](double a) { return oval.p(a) - center.dot(unit_normal(a)) - r; };
  auto df = [&](double a) { return oval.dp(a) - center.dot(unit_tangent(a)); };
  constexpr int kNodes = 256;
  const double lo = a2 + 1e-9, hi = a2 + kPi;
  double prev = lo;
  for (int k = 1; k <= kNodes; ++k) {
    const double x = lo + (hi - lo) * static_cast<double>(k) / kNodes;
    if (f(x) >= 0.0) {
      const double a3 = numeric::bracketed_root(f, df, prev, x, {1e-15, 200, 2});
      return support_lines_intersection(a2, oval.p(a2), a3, oval.p(a3));
    }
    prev = x;
  }
  throw StepFailure("no common tangent of auxiliary circle and oval");
}

inline PhasePoint to_phase(const SupportOval& oval, const LinePairState& s) {
  return {wrap_angle(s.alpha1), radii(oval, s).first};
}

/// Inverts R = R₁(α, α₂) for α₂ ∈ (α, α + π).
inline LinePairState from_phase(const SupportOval& oval, const PhasePoint& pp) {
  if (!(pp.R > 0.0)) throw DomainError("phase radius must be positive");
  return {pp.alpha, detail::solve_forward_angle(oval, pp.alpha, pp.R)};
}

/// T in (α, R) coordinates: (α, R) ↦ (α₂, R₂(α, α₂)).
inline PhasePoint phase_map(const SupportOval& oval, const PhasePoint& pp) {
  const LinePairState s = from_phase(oval, pp);
  return {s.alpha2, radii(oval, s).second};
}

/// DT in (R, α) order from the second partials at the chord (α₁, α₂):
/// rows (R′, α′), columns (R, α).
inline Eigen::Matrix2d jacobian(const SupportOval& oval, const LinePairState& s) {
  const Hessian h = hess_S(oval, s);
  Eigen::Matrix2d j;
  j << -h.S22 / h.S12, (h.S12 * h.S12 - h.S11 * h.S22) / h.S12, -1.0 / h.S12, -h.S11 / h.S12;
  return j;
}

/// DT in (R, α) order by five-point central differences of phase_map.
inline Eigen::Matrix2d jacobian_fd(const SupportOval& oval, const LinePairState& s, double h_alpha = 1e-4,
                                   double h_rel = 1e-4) {
  const PhasePoint base = to_phase(oval, s);
  const double alpha0 = s.alpha1;
  const double hR = h_rel * base.R;
  // α′ is unwrapped against the base image to avoid 2π jumps.
  const double a_img = s.alpha2;
  auto image = [&](double R, double a) {
    const PhasePoint q = phase_map(oval, {a, R});
    return Eigen::Vector2d(q.R, a_img + angle_diff(q.alpha, a_img));
  };
  auto diff = [&](auto&& g, double hh) -> Eigen::Vector2d {
    return (g(-2.0 * hh) - 8.0 * g(-hh) + 8.0 * g(hh) - g(2.0 * hh)) / (12.0 * hh);
  };
  Eigen::Matrix2d j;
  j.col(0) = diff([&](double d) { return image(base.R + d, alpha0); }, hR);
  j.col(1) = diff([&](double d) { return image(base.R, alpha0 + d); }, h_alpha);
  return j;
}

/// |det DT − 1| with DT taken from finite differences of the map itself.
inline double symplectic_defect(const SupportOval& oval, const LinePairState& s) {
  return std::abs(jacobian_fd(oval, s).determinant() - 1.0);
}

struct TwistReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t violations_T = 0;
  std::size_t violations_T2 = 0;
  double min_twist_T = std::numeric_limits<double>::infinity();
  double min_twist_T2 = std::numeric_limits<double>::infinity();
  double max_det_defect = 0.0;
  bool passed() const { return violations_T == 0 && violations_T2 == 0 && samples > skipped; }
};

/// ∂α′/∂R of T at a state and of T² through the next chord.
inline std::pair<double, double> twist_values(const SupportOval& oval, const LinePairState& s) {
  const Eigen::Matrix2d a = jacobian(oval, s);
  const Eigen::Matrix2d b = jacobian(oval, step(oval, s));
  return {a(1, 0), (b * a)(1, 0)};
}

/// Samples states with α₁ uniform on [0, 2π) and ω uniform on [0.1, π − 0.1].
inline TwistReport twist_report(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ua(0.0, kTwoPi), uw(0.1, kPi - 0.1);
  TwistReport r;
  r.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = ua(rng);
    const LinePairState s{a, a + uw(rng)};
    try {
      const auto [t1, t2] = twist_values(oval, s);
      r.min_twist_T = std::min(r.min_twist_T, t1);
      r.min_twist_T2 = std::min(r.min_twist_T2, t2);
      if (!(t1 > 0.0)) ++r.violations_T;
      if (!(t2 > 0.0)) ++r.violations_T2;
      r.max_det_defect = std::max(r.max_det_defect, std::abs(jacobian(oval, s).determinant() - 1.0));
    } catch (const StepFailure&) {
      ++r.skipped;
    } catch (const DomainError&) {
      ++r.skipped;
    }
  }
  return r;
}

/// ∮ R dα around a closed loop of phase points (trapezoid rule, α unwrapped).
inline double loop_action(const std::vector<PhasePoint>& loop) {
  double sum = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    const PhasePoint& a = loop[i];
    const PhasePoint& b = loop[(i + 1) % n];
    sum += 0.5 * (a.R + b.R) * angle_diff(b.alpha, a.alpha);
  }
  return sum;
}

struct Orbit {
  std::vector<LinePairState> states;
  std::vector<PhasePoint> phase;
  std::vector<PlanePoint> vertices;
};

/// n applications of step; states[0] is the initial state.
inline Orbit orbit(const SupportOval& oval, const LinePairState& start, std::size_t n) {
  require_chord(start);
  Orbit o;
  o.states.reserve(n + 1);
  o.states.push_back(start);
  for (std::size_t k = 0; k < n; ++k) {
    try {
      o.states.push_back(step(oval, o.states.back()));
    } catch (const Error& e) {
      throw StepFailure(e.what(), k);
    }
  }
  for (const auto& s : o.states) {
    o.phase.push_back(to_phase(oval, s));
    o.vertices.push_back(vertex(oval, s));
  }
  return o;
}

/// Mean advance of α₁ per step over n steps, in turns.
inline double rotation_number(const SupportOval& oval, const LinePairState& start, std::size_t n) {
  LinePairState s = start;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      s = step(oval, s);
    } catch (const Error& e) {
      throw StepFailure(e.what(), k);
    }
  }
  return (s.alpha1 - start.alpha1) / (kTwoPi * static_cast<double>(n));
}

/// Distance between the first and last state of an orbit in angle space (mod 2π).
inline double closure_defect(const LinePairState& a, const LinePairState& b) {
  return std::max(std::abs(angle_diff(a.alpha1, b.alpha1)), std::abs(angle_diff(a.alpha2, b.alpha2)));
}

}  // namespace olb
