#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "olb/billiard_map.hpp"
#include "olb/errors.hpp"
#include "olb/genfun.hpp"
#include "olb/support_oval.hpp"

namespace olb::verify {

struct Check {
  std::string name;
  bool passed = false;
  bool skipped = false;
  double measured = 0.0;   ///< worst defect (or minimum, for sign checks)
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t failures = 0;  ///< samples where the computation itself failed
};

struct Report {
  std::vector<Check> checks;
  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed && !c.skipped; });
  }
};

/// Chords with α₁ uniform on [0, 2π) and ω uniform on [ω_lo, π − ω_lo].
class ChordSampler {
 public:
  explicit ChordSampler(std::uint64_t seed, double omega_lo = 0.1) : rng_(seed), ua_(0.0, kTwoPi), uw_(omega_lo, kPi - omega_lo) {}
  ChordConfig operator()() {
    const double a = ua_(rng_);
    return {a, a + uw_(rng_)};
  }

 private:
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> ua_, uw_;
};

inline double scaled(double err, double ref) { return err / std::max(1.0, std::abs(ref)); }

struct GenfunDefects {
  double grad = 0.0, hess = 0.0, identity = 0.0, p_form = 0.0;
  double min_S11 = 0.0, max_S12 = 0.0, min_S22 = 0.0;
};

/// Closed forms of one chord against central differences of S (steps
/// 1e-5 for the gradient, 1e-4 for the Hessian). Defects are relative to
/// max(1, |value|).
inline GenfunDefects genfun_defects(const SupportOval& oval, const ChordConfig& c) {
  auto S = [&](double a1, double a2) { return generating_S(oval, {a1, a2}); };
  const double a1 = c.alpha1, a2 = c.alpha2;
  GenfunDefects d;
  const auto [s1, s2] = grad_S(oval, c);
  const double h1 = 1e-5;
  const double fd1 = (S(a1 + h1, a2) - S(a1 - h1, a2)) / (2 * h1);
  const double fd2 = (S(a1, a2 + h1) - S(a1, a2 - h1)) / (2 * h1);
  d.grad = std::max(scaled(std::abs(fd1 - s1), s1), scaled(std::abs(fd2 - s2), s2));

  const Hessian h = hess_S(oval, c);
  const double h2 = 1e-4;
  const double s0 = S(a1, a2);
  const double f11 = (S(a1 + h2, a2) - 2 * s0 + S(a1 - h2, a2)) / (h2 * h2);
  const double f22 = (S(a1, a2 + h2) - 2 * s0 + S(a1, a2 - h2)) / (h2 * h2);
  const double f12 =
      (S(a1 + h2, a2 + h2) - S(a1 + h2, a2 - h2) - S(a1 - h2, a2 + h2) + S(a1 - h2, a2 - h2)) / (4 * h2 * h2);
  d.hess = std::max({scaled(std::abs(f11 - h.S11), h.S11), scaled(std::abs(f12 - h.S12), h.S12),
                     scaled(std::abs(f22 - h.S22), h.S22)});

  const auto [l1, l2] = tangent_lengths(oval, c);
  d.identity = scaled(std::abs(s0 - (l1 + l2 - oval.arc_length(a1, a2))), s0);
  const auto [r1, r2] = grad_S_raw(oval, c);
  d.p_form = std::max({scaled(std::abs(r1 - s1), s1), scaled(std::abs(r2 - s2), s2),
                       scaled(std::abs(S1_fraction(oval, c) - s1), s1), scaled(std::abs(S2_fraction(oval, c) - s2), s2)});
  d.min_S11 = h.S11;
  d.max_S12 = h.S12;
  d.min_S22 = h.S22;
  return d;
}

inline std::vector<Check> genfun_suite(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 11) {
  Check grad{"genfun.grad_vs_fd", false, false, 0.0, 1e-6, samples};
  Check hess{"genfun.hess_vs_fd", false, false, 0.0, 1e-4, samples};
  Check ident{"genfun.S_identity", false, false, 0.0, 1e-10, samples};
  Check pform{"genfun.p_form_agreement", false, false, 0.0, 1e-10, samples};
  Check signs{"genfun.sign_pattern", false, false, std::numeric_limits<double>::infinity(), 0.0, samples};
  ChordSampler draw(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const ChordConfig c = draw();
    const GenfunDefects d = genfun_defects(oval, c);
    grad.measured = std::max(grad.measured, d.grad);
    hess.measured = std::max(hess.measured, d.hess);
    ident.measured = std::max(ident.measured, d.identity);
    pform.measured = std::max(pform.measured, d.p_form);
    if (d.grad > grad.tolerance) ++grad.violations;
    if (d.hess > hess.tolerance) ++hess.violations;
    if (d.identity > ident.tolerance) ++ident.violations;
    if (d.p_form > pform.tolerance) ++pform.violations;
    const double margin = std::min({d.min_S11, -d.max_S12, d.min_S22});
    signs.measured = std::min(signs.measured, margin);
    if (!(margin > 0.0)) ++signs.violations;
  }
  std::vector<Check> out{grad, hess, ident, pform, signs};
  for (Check& c : out) c.passed = c.violations == 0;
  return out;
}

/// step + vertex against the geometric construction on exterior points
/// M = vertex(α₁, α₂) of random chords.
inline Check map_oracle_check(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 13, double tol = 1e-8) {
  Check c{"map.cartesian_oracle", false, false, 0.0, tol, samples};
  ChordSampler draw(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    const PlanePoint m = vertex(oval, draw());
    try {
      const PlanePoint a = vertex(oval, step(oval, state_from_point(oval, m)));
      const PlanePoint b = cartesian_step(oval, m);
      const double err = (a - b).norm();
      c.measured = std::max(c.measured, err);
      if (!(err < tol)) ++c.violations;
    } catch (const StepFailure&) {
      ++c.failures;
    }
  }
  c.passed = c.violations == 0 && c.failures < samples;
  return c;
}

inline Check symplectic_check(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 17, double tol = 1e-6) {
  Check c{"map.symplectic_defect", false, false, 0.0, tol, samples};
  ChordSampler draw(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    try {
      const double d = symplectic_defect(oval, draw());
      c.measured = std::max(c.measured, d);
      if (!(d < tol)) ++c.violations;
    } catch (const StepFailure&) {
      ++c.failures;
    }
  }
  c.passed = c.violations == 0 && c.failures < samples;
  return c;
}

inline std::vector<Check> twist_checks(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 19) {
  const TwistReport r = twist_report(oval, samples, seed);
  Check t1{"map.twist_T", r.violations_T == 0 && r.samples > r.skipped, false, r.min_twist_T, 0.0, samples,
           r.violations_T, r.skipped};
  Check t2{"map.twist_T2", r.violations_T2 == 0 && r.samples > r.skipped, false, r.min_twist_T2, 0.0, samples,
           r.violations_T2, r.skipped};
  return {t1, t2};
}

/// Validation first; the dynamical suites are skipped on invalid tables.
inline Report full_suite(const SupportOval& oval, std::size_t samples, std::uint64_t seed = 1) {
  Report rep;
  const ValidationReport v = oval.validate();
  Check vc{"oval.validate", v.passed, false, v.min_curvature_radius, 0.0, SupportOval::kValidationGrid};
  vc.violations = v.failures.size();
  rep.checks.push_back(vc);
  auto skipped = [](std::string name) {
    Check c;
    c.name = std::move(name);
    c.skipped = true;
    return c;
  };
  if (!v.passed) {
    for (const char* n : {"genfun.grad_vs_fd", "genfun.hess_vs_fd", "genfun.S_identity", "genfun.p_form_agreement",
                          "genfun.sign_pattern", "map.cartesian_oracle", "map.symplectic_defect", "map.twist_T",
                          "map.twist_T2"})
      rep.checks.push_back(skipped(n));
    return rep;
  }
  for (Check& c : genfun_suite(oval, samples, seed)) rep.checks.push_back(c);
  rep.checks.push_back(map_oracle_check(oval, samples, seed + 1));
  rep.checks.push_back(symplectic_check(oval, samples, seed + 2));
  for (Check& c : twist_checks(oval, samples, seed + 3)) rep.checks.push_back(c);
  return rep;
}

}  // namespace olb::verify
