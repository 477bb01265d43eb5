#pragma once

#include <cmath>
#include <tuple>
#include <utility>

#include "olb/errors.hpp"
#include "olb/support_oval.hpp"

namespace olb {

/// Tangency angles of two consecutive tangent lines; ω = α₂ − α₁.
struct ChordConfig {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  double omega() const { return alpha2 - alpha1; }
};

inline constexpr double kMinGap = 1e-4;

inline void require_chord(const ChordConfig& c) {
  const double w = c.omega();
  if (!(w >= kMinGap && w <= kPi - kMinGap)) throw DomainError("chord gap ω outside (0, π)");
}

struct StepData {
  double l1 = 0.0, l2 = 0.0;
  double S = 0.0;
  double R1 = 0.0, R2 = 0.0;
  double S11 = 0.0, S12 = 0.0, S22 = 0.0;
};

struct Hessian {
  double S11 = 0.0, S12 = 0.0, S22 = 0.0;
};

inline std::pair<double, double> tangent_lengths(const SupportOval& oval, const ChordConfig& c) {
  require_chord(c);
  const SupportValue v1 = oval.eval(c.alpha1), v2 = oval.eval(c.alpha2);
  const double w = c.omega();
  const double s = std::sin(w), cot = std::cos(w) / s;
  return {-v1.dp + v2.p / s - v1.p * cot, v2.dp + v1.p / s - v2.p * cot};
}

/// S = (p₁ + p₂) tan(ω/2) − ∫_{α₁}^{α₂} p.
inline double generating_S(const SupportOval& oval, const ChordConfig& c) {
  require_chord(c);
  return (oval.p(c.alpha1) + oval.p(c.alpha2)) * std::tan(0.5 * c.omega()) - oval.integral(c.alpha1, c.alpha2);
}

/// R₁ = l₁ tan(ω/2), R₂ = l₂ tan(ω/2).
inline std::pair<double, double> radii(const SupportOval& oval, const ChordConfig& c) {
  const auto [l1, l2] = tangent_lengths(oval, c);
  const double t = std::tan(0.5 * c.omega());
  return {l1 * t, l2 * t};
}

/// (S₁, S₂) = (−R₁, R₂).
inline std::pair<double, double> grad_S(const SupportOval& oval, const ChordConfig& c) {
  const auto [r1, r2] = radii(oval, c);
  return {-r1, r2};
}

/// (S₁, S₂) by direct differentiation of the p-form of S.
inline std::pair<double, double> grad_S_raw(const SupportOval& oval, const ChordConfig& c) {
  require_chord(c);
  const SupportValue v1 = oval.eval(c.alpha1), v2 = oval.eval(c.alpha2);
  const double half = 0.5 * c.omega();
  const double t = std::tan(half), sec2 = 1.0 / (2.0 * std::cos(half) * std::cos(half));
  return {v1.dp * t - (v1.p + v2.p) * sec2 + v1.p, v2.dp * t + (v1.p + v2.p) * sec2 - v2.p};
}

/// S₁ in the single-fraction form [p₁ cos ω − p₂ + p₁′ sin ω] / (2 cos²(ω/2)).
inline double S1_fraction(const SupportOval& oval, const ChordConfig& c) {
  require_chord(c);
  const SupportValue v1 = oval.eval(c.alpha1), v2 = oval.eval(c.alpha2);
  const double w = c.omega(), ch = std::cos(0.5 * w);
  return (v1.p * std::cos(w) - v2.p + v1.dp * std::sin(w)) / (2.0 * ch * ch);
}

/// S₂ in the single-fraction form [p₁ − p₂ cos ω + p₂′ sin ω] / (2 cos²(ω/2)).
inline double S2_fraction(const SupportOval& oval, const ChordConfig& c) {
  require_chord(c);
  const SupportValue v1 = oval.eval(c.alpha1), v2 = oval.eval(c.alpha2);
  const double w = c.omega(), ch = std::cos(0.5 * w);
  return (v1.p - v2.p * std::cos(w) + v2.dp * std::sin(w)) / (2.0 * ch * ch);
}

inline Hessian hess_S(const SupportOval& oval, const ChordConfig& c) {
  const auto [r1, r2] = radii(oval, c);
  const double w = c.omega(), t = std::tan(0.5 * w);
  return {t * (r1 + oval.curvature_radius(c.alpha1)), -(r1 + r2) / std::sin(w),
          t * (r2 + oval.curvature_radius(c.alpha2))};
}

inline StepData step_data(const SupportOval& oval, const ChordConfig& c) {
  StepData d;
  std::tie(d.l1, d.l2) = tangent_lengths(oval, c);
  d.S = generating_S(oval, c);
  const double t = std::tan(0.5 * c.omega());
  d.R1 = d.l1 * t;
  d.R2 = d.l2 * t;
  const Hessian h = hess_S(oval, c);
  d.S11 = h.S11;
  d.S12 = h.S12;
  d.S22 = h.S22;
  return d;
}

}  // namespace olb
