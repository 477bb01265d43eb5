#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "olb/errors.hpp"
#include "olb/geometry.hpp"
#include "olb/numeric.hpp"
#include "olb/quintic_spline.hpp"
#include "olb/support_oval.hpp"

namespace olb {

/// One term s·sin kx + c·cos kx of f.
struct Harmonic {
  int k = 2;
  double sin = 0.0;
  double cos = 0.0;
};

/// f with f(x + π/2) = −f(x), |f′| < 2, f(0) = 0, given either as harmonics
/// (k ≡ 2 mod 4) or as a callable returning (f, f′, f″).
struct FourPeriodicSpec {
  std::vector<Harmonic> harmonics;
  std::function<std::array<double, 3>(double)> custom;

  static FourPeriodicSpec from_harmonics(std::vector<Harmonic> h) { return {std::move(h), {}}; }
  static FourPeriodicSpec zero() { return {}; }
  /// f(x) = cos 2t · sin 2x.
  static FourPeriodicSpec ellipse(double t) { return from_harmonics({{2, std::cos(2.0 * t), 0.0}}); }
  static FourPeriodicSpec from_callable(std::function<std::array<double, 3>(double)> fn) { return {{}, std::move(fn)}; }

  /// (f, f′, f″) at x.
  std::array<double, 3> eval(double x) const {
    if (custom) return custom(x);
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (const Harmonic& h : harmonics) {
      const double k = h.k;
      const double s = std::sin(k * x), c = std::cos(k * x);
      out[0] += h.sin * s + h.cos * c;
      out[1] += k * (h.sin * c - h.cos * s);
      out[2] -= k * k * (h.sin * s + h.cos * c);
    }
    return out;
  }
};

/// Support data of one parallelogram of the invariant family.
struct ParallelogramState {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  double omega() const { return alpha2 - alpha1; }
  double perimeter() const { return 4.0 * (p1 + p2) / std::sin(omega()); }
};

struct ContactPoint {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// x = (α₁ + α₂)/2, y = 2 cos ω, z = p₂ − p₁.
inline ContactPoint contact_coordinates(const ParallelogramState& s) {
  return {0.5 * (s.alpha1 + s.alpha2), 2.0 * std::cos(s.omega()), s.p2 - s.p1};
}

/// Inverse of contact_coordinates on the perimeter-4 level p₁ + p₂ = sin ω.
inline ParallelogramState from_contact(const ContactPoint& c) {
  if (!(std::abs(c.y) < 2.0)) throw DomainError("contact y must lie in (−2, 2)");
  const double w = std::acos(0.5 * c.y), s = std::sin(w);
  return {c.x - 0.5 * w, c.x + 0.5 * w, 0.5 * (s - c.z), 0.5 * (s + c.z)};
}

/// The family member at parameter x: cos ω = f′/2, α₁,₂ = x ∓ ω/2,
/// p₁,₂ = (√(4 − f′²) ∓ 2f)/4.
inline ParallelogramState parallelogram_orbit(const FourPeriodicSpec& spec, double x) {
  const auto [f, fp, fpp] = spec.eval(x);
  (void)fpp;
  if (!(std::abs(fp) < 2.0)) throw ConstructionError(ConstructionError::Kind::kFPrimeBound, "f-prime bound violated");
  const double w = std::acos(0.5 * fp);
  const double root = std::sqrt(4.0 - fp * fp);
  return {x - 0.5 * w, x + 0.5 * w, 0.25 * (root - 2.0 * f), 0.25 * (root + 2.0 * f)};
}

/// Side lines (α, p) of a parallelogram in counterclockwise order.
inline std::array<std::pair<double, double>, 4> parallelogram_sides(const ParallelogramState& s) {
  return {{{s.alpha1, s.p1}, {s.alpha2, s.p2}, {s.alpha1 + kPi, s.p1}, {s.alpha2 + kPi, s.p2}}};
}

struct ForgedTable {
  SupportOval oval;
  bool fourier = false;     ///< converged to a trigonometric series
  double min_alpha_prime = 0.0;
  double max_abs_fprime = 0.0;
};

namespace detail {

inline double max_abs_on_circle(const std::function<double(double)>& g, std::size_t grid = 4096) {
  const double step = kTwoPi / static_cast<double>(grid);
  double best = 0.0, at = 0.0;
  for (std::size_t i = 0; i < grid; ++i) {
    const double x = step * static_cast<double>(i);
    if (std::abs(g(x)) > best) {
      best = std::abs(g(x));
      at = x;
    }
  }
  double lo = at - step, hi = at + step;
  for (int it = 0; it < 80; ++it) {
    const double m1 = lo + (hi - lo) * 0.381966011250105, m2 = hi - (hi - lo) * 0.381966011250105;
    if (std::abs(g(m1)) > std::abs(g(m2))) hi = m2; else lo = m1;
  }
  return std::max(best, std::abs(g(0.5 * (lo + hi))));
}

}  // namespace detail

/// Builds the table whose 4-periodic parallelograms are the family of
/// parallelogram_orbit. The support function is known exactly through the
/// inversion of α(x) = x − ω(x)/2 and then converted to a trigonometric series.
inline ForgedTable from_f(const FourPeriodicSpec& spec) {
  using Kind = ConstructionError::Kind;
  for (const Harmonic& h : spec.harmonics)
    if (h.k <= 0 || h.k % 4 != 2)
      throw ConstructionError(Kind::kAntisymmetry, "harmonic k=" + std::to_string(h.k) + " breaks f(x+π/2) = −f(x)");
  if (spec.custom) {
    double defect = 0.0;
    for (int i = 0; i < 512; ++i) {
      const double x = kTwoPi * i / 512.0;
      defect = std::max(defect, std::abs(spec.eval(x + 0.5 * kPi)[0] + spec.eval(x)[0]));
    }
    if (defect > 1e-12) throw ConstructionError(Kind::kAntisymmetry, "f(x+π/2) = −f(x) violated");
  }
  if (std::abs(spec.eval(0.0)[0]) > 1e-12) throw ConstructionError(Kind::kNormalization, "f(0) must vanish");
  const double max_fp = detail::max_abs_on_circle([&](double x) { return spec.eval(x)[1]; });
  if (!(max_fp < 2.0)) throw ConstructionError(Kind::kFPrimeBound, "f-prime bound violated");

  auto sin_omega = [](double fp) { return 0.5 * std::sqrt(4.0 - fp * fp); };
  auto alpha_prime = [&](double x) {
    const auto v = spec.eval(x);
    return 1.0 + v[2] / (4.0 * sin_omega(v[1]));
  };
  double min_ap = alpha_prime(0.0);
  for (int i = 1; i < 4096; ++i) min_ap = std::min(min_ap, alpha_prime(kTwoPi * i / 4096.0));
  if (!(min_ap > 0.0)) throw ConstructionError(Kind::kAlphaMonotonicity, "α′(x) not positive");

  auto eval = [spec, sin_omega](double a) {
    auto alpha = [&](double x) { return x - 0.5 * std::acos(0.5 * spec.eval(x)[1]); };
    auto dalpha = [&](double x) {
      const auto v = spec.eval(x);
      return 1.0 + v[2] / (4.0 * sin_omega(v[1]));
    };
    const double x = numeric::safeguarded_newton([&](double t) { return alpha(t) - a; }, dalpha, a, a + 0.5 * kPi,
                                                 a + 0.25 * kPi, 1e-16, 200);
    const auto v = spec.eval(x);
    const double so = sin_omega(v[1]);
    const double ap = 1.0 + v[2] / (4.0 * so);
    return SupportValue{0.5 * so - 0.5 * v[0], -0.5 * v[1], -0.5 * v[2] / ap};
  };

  double min_rho = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 2048; ++i) {
    const SupportValue v = eval(kTwoPi * i / 2048.0);
    min_rho = std::min(min_rho, v.p + v.d2p);
  }
  if (!(min_rho > 0.0)) throw ConstructionError(Kind::kConvexity, "constructed curve is not strictly convex");

  ForgedTable out{SupportOval::circle(1.0), false, min_ap, max_fp};
  if (auto fit = SupportOval::fourier_fit(eval, 1e-13, 16384, true)) {
    out.oval = *fit;
    out.fourier = true;
  } else {
    out.oval = SupportOval::from_function(eval, "four-periodic", true);
  }
  const ValidationReport rep = out.oval.validate();
  if (!rep.passed) throw ConstructionError(Kind::kConvexity, rep.failures.front());
  return out;
}

/// Extends a support arc on [0, π/2] (uniform samples including both ends)
/// to a centrally symmetric table whose tangent parallelograms all have
/// perimeter 4. The arc is shifted by a constant so that p(0) + p(π/2) = 1.
inline SupportOval radon_like(const std::vector<double>& arc, double normalization_tol = 1e-6,
                              double endpoint_slope_tol = 1e-5) {
  using Kind = ConstructionError::Kind;
  if (arc.size() < 9) throw ConstructionError(Kind::kArcConstraint, "radon arc needs at least 9 samples");
  const std::size_t k = arc.size() - 1;
  const double h = 0.5 * kPi / static_cast<double>(k);

  const double defect = arc.front() + arc.back() - 1.0;
  if (std::abs(defect) > normalization_tol)
    throw ConstructionError(Kind::kNormalization, "arc must satisfy p(0) + p(π/2) = 1");
  // Fourth-order one-sided differences at both ends.
  auto slope = [&](double a0, double a1, double a2, double a3, double a4) {
    return (-25.0 * a0 + 48.0 * a1 - 36.0 * a2 + 16.0 * a3 - 3.0 * a4) / (12.0 * h);
  };
  const double s0 = slope(arc[0], arc[1], arc[2], arc[3], arc[4]);
  const double s1 = -slope(arc[k], arc[k - 1], arc[k - 2], arc[k - 3], arc[k - 4]);
  if (std::abs(s0) > endpoint_slope_tol || std::abs(s1) > endpoint_slope_tol)
    throw ConstructionError(Kind::kArcConstraint, "arc must satisfy p′(0) = p′(π/2) = 0");

  // Even reflection about 0 and π/2: a π-periodic spline with zero end slopes.
  std::vector<double> mirrored(2 * k);
  for (std::size_t j = 0; j <= k; ++j) mirrored[j] = arc[j] - 0.5 * defect;
  for (std::size_t j = 1; j < k; ++j) mirrored[2 * k - j] = mirrored[j];
  const auto spline = std::make_shared<const PeriodicQuinticSpline>(std::move(mirrored), kPi);

  for (std::size_t j = 0; j <= 4 * k; ++j) {
    const double a = 0.5 * kPi * static_cast<double>(j) / static_cast<double>(4 * k);
    const auto v = spline->eval(a);
    if (!(std::abs(v.df) < 1.0)) throw ConstructionError(Kind::kArcConstraint, "arc slope |p′| must stay below 1");
    if (!(1.0 + v.d2f / std::sqrt(1.0 - v.df * v.df) > 0.0))
      throw ConstructionError(Kind::kAlphaMonotonicity, "β(α) = α + arccos(−p′) not increasing");
    if (!(v.f + v.d2f > 0.0)) throw ConstructionError(Kind::kConvexity, "arc is not strictly convex");
  }

  auto eval = [spline](double alpha) -> SupportValue {
    double a = std::fmod(alpha, kPi);
    if (a < 0.0) a += kPi;
    if (a <= 0.5 * kPi) {
      const auto v = spline->eval(a);
      return {v.f, v.df, v.d2f};
    }
    auto beta = [&](double t) { return t + std::acos(-spline->eval(t).df) - a; };
    auto dbeta = [&](double t) {
      const auto v = spline->eval(t);
      return 1.0 + v.d2f / std::sqrt(1.0 - v.df * v.df);
    };
    // β maps [0, π/2] onto [π/2, π] up to rounding at the ends.
    double t = 0.5 * kPi;
    if (beta(0.0) >= 0.0) {
      t = 0.0;
    } else if (beta(0.5 * kPi) > 0.0) {
      t = numeric::safeguarded_newton(beta, dbeta, 0.0, 0.5 * kPi, a - 0.5 * kPi, 1e-16, 200);
    }
    const auto v = spline->eval(t);
    const double w = a - t;
    const double bp = 1.0 + v.d2f / std::sqrt(1.0 - v.df * v.df);
    return {-v.f + std::sin(w), std::cos(w), -std::sin(w) * (1.0 - 1.0 / bp)};
  };

  for (double seam : {0.5 * kPi, kPi}) {
    const SupportValue l = eval(std::nextafter(seam, 0.0)), r = eval(seam + 1e-15);
    const SupportValue at = eval(seam);
    const double d = std::max({std::abs(l.p - r.p), std::abs(l.dp - r.dp), std::abs(at.p - r.p)});
    if (d > 1e-8) throw ConstructionError(Kind::kSeamDiscontinuity, "seam discontinuity at " + std::to_string(seam));
  }

  SupportOval oval = SupportOval::from_function(eval, "radon-like", true);
  const ValidationReport rep = oval.validate();
  if (!rep.passed) throw ConstructionError(Kind::kConvexity, rep.failures.front());
  return oval;
}

/// Samples of an exact support function on [0, π/2], ends included.
inline std::vector<double> sample_arc(const std::function<double(double)>& p, std::size_t segments) {
  std::vector<double> out(segments + 1);
  for (std::size_t j = 0; j <= segments; ++j) out[j] = p(0.5 * kPi * static_cast<double>(j) / static_cast<double>(segments));
  return out;
}

}  // namespace olb
