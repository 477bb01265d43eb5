#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "olb/errors.hpp"
#include "olb/geometry.hpp"
#include "olb/numeric.hpp"
#include "olb/quintic_spline.hpp"

namespace olb {

/// p, p′, p″ of a support function at one angle.
struct SupportValue {
  double p = 0.0;
  double dp = 0.0;
  double d2p = 0.0;
};

/// p(α) = a0 + Σ_k cos[k−1]·cos kα + sin[k−1]·sin kα.
struct FourierSupport {
  double a0 = 0.0;
  std::vector<double> cos;
  std::vector<double> sin;
};

/// Uniform samples of p over [0, 2π) with periodic quintic interpolation.
struct SampledSupport {
  PeriodicQuinticSpline spline;
};

/// Support function known through an evaluator (constructed tables).
/// Serializes as samples.
struct FunctionSupport {
  std::shared_ptr<const std::function<SupportValue(double)>> eval;
  std::string label;
};

struct ValidationReport {
  bool passed = false;
  double min_p = 0.0;
  double min_p_at = 0.0;
  double min_curvature_radius = 0.0;
  double min_curvature_radius_at = 0.0;
  double max_periodicity_defect = 0.0;
  std::vector<std::string> failures;
};

/// A smooth strictly convex oval given by its 2π-periodic support function.
/// Immutable; safe to share between threads.
class SupportOval {
 public:
  using Representation = std::variant<FourierSupport, SampledSupport, FunctionSupport>;

  static constexpr std::size_t kValidationGrid = 2048;

  static SupportOval fourier(double a0, std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    const std::size_t k = std::max(cos_coeffs.size(), sin_coeffs.size());
    cos_coeffs.resize(k, 0.0);
    sin_coeffs.resize(k, 0.0);
    FourierSupport f{a0, std::move(cos_coeffs), std::move(sin_coeffs)};
    bool symmetric = true;
    for (std::size_t i = 0; i < k; i += 2) {  // odd harmonics live at even indices
      if (std::abs(f.cos[i]) > 1e-15 || std::abs(f.sin[i]) > 1e-15) symmetric = false;
    }
    return SupportOval(Representation{std::move(f)}, symmetric);
  }

  static SupportOval circle(double radius) { return fourier(radius, {}, {}); }

  static SupportOval samples(std::vector<double> p) {
    const std::size_t n = p.size();
    bool symmetric = n % 2 == 0;
    double scale = 0.0;
    for (double v : p) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; symmetric && j < n / 2; ++j)
      symmetric = std::abs(p[j] - p[j + n / 2]) <= 1e-13 * std::max(1.0, scale);
    return SupportOval(Representation{SampledSupport{PeriodicQuinticSpline(std::move(p), kTwoPi)}}, symmetric);
  }

  static SupportOval from_function(std::function<SupportValue(double)> eval, std::string label,
                                   bool centrally_symmetric) {
    return SupportOval(
        Representation{FunctionSupport{
            std::make_shared<const std::function<SupportValue(double)>>(std::move(eval)), std::move(label)}},
        centrally_symmetric);
  }

  /// Trigonometric interpolant of an evaluator on 2^k uniform nodes, doubling
  /// until the off-node error is below `tol`. Returns nothing if the
  /// coefficients do not settle by `max_nodes`.
  static std::optional<SupportOval> fourier_fit(const std::function<SupportValue(double)>& eval, double tol = 1e-13,
                                                std::size_t max_nodes = 8192, bool force_symmetric = false) {
    for (std::size_t n = 64; n <= max_nodes; n *= 2) {
      std::vector<double> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = eval(kTwoPi * static_cast<double>(j) / static_cast<double>(n)).p;
      const std::size_t kmax = n / 2 - 1;
      double a0 = 0.0;
      for (double v : y) a0 += v;
      a0 /= static_cast<double>(n);
      std::vector<double> ca(kmax, 0.0), sa(kmax, 0.0);
      for (std::size_t k = 1; k <= kmax; ++k) {
        if (force_symmetric && k % 2 == 1) continue;
        const double step = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        const double c1 = std::cos(step), s1 = std::sin(step);
        double c = 1.0, s = 0.0, sc = 0.0, ss = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
          sc += y[j] * c;
          ss += y[j] * s;
          const double nc = c * c1 - s * s1;
          s = s * c1 + c * s1;
          c = nc;
          if ((j & 63u) == 63u) {  // re-anchor the rotation recurrence
            const double ang = step * static_cast<double>(j + 1);
            c = std::cos(ang);
            s = std::sin(ang);
          }
        }
        ca[k - 1] = 2.0 * sc / static_cast<double>(n);
        sa[k - 1] = 2.0 * ss / static_cast<double>(n);
      }
      // Coefficients at the rounding level only add k-weighted noise to p′.
      const double scale = std::max(1.0, std::abs(a0));
      std::size_t keep = kmax;
      const double floor = 1e-16 * scale;
      while (keep > 0 && std::abs(ca[keep - 1]) < floor && std::abs(sa[keep - 1]) < floor) --keep;
      ca.resize(keep);
      sa.resize(keep);
      SupportOval candidate = fourier(a0, ca, sa);
      // p′ carries the k-weighted rounding of every coefficient: allow it 100 tol.
      double err = 0.0;
      for (std::size_t j = 0; j < 97; ++j) {
        const double a = kTwoPi * (static_cast<double>(j) + 0.37) / 97.0;
        const SupportValue ex = eval(a);
        const SupportValue ap = candidate.eval(a);
        err = std::max({err, std::abs(ex.p - ap.p), 0.01 * std::abs(ex.dp - ap.dp)});
      }
      if (err < tol * scale) return candidate;
    }
    return std::nullopt;
  }

  /// Support function of the origin-centred ellipse with semi-axes a (x) and b (y),
  /// as a converged Fourier series.
  static SupportOval ellipse(double a, double b) {
    if (!(a > 0.0 && b > 0.0)) throw DomainError("ellipse semi-axes must be positive");
    auto exact = [a, b](double t) { return ellipse_support(a, b, t); };
    auto fit = fourier_fit(exact, 1e-13, 1 << 14, true);
    if (!fit) throw ConvergenceError("ellipse Fourier series did not converge");
    return *fit;
  }

  /// Closed-form ellipse support value, used where an exact reference is needed.
  static SupportValue ellipse_support(double a, double b, double t) {
    const double c = std::cos(t), s = std::sin(t);
    const double q = a * a * c * c + b * b * s * s;
    const double h = std::sqrt(q);
    const double dq = 2.0 * (b * b - a * a) * s * c;
    const double d2q = 2.0 * (b * b - a * a) * (c * c - s * s);
    return {h, 0.5 * dq / h, 0.5 * d2q / h - 0.25 * dq * dq / (q * h)};
  }

  SupportValue eval(double alpha) const {
    return std::visit([alpha](const auto& rep) { return eval_rep(rep, alpha); }, rep_);
  }
  double p(double alpha) const { return eval(alpha).p; }
  double dp(double alpha) const { return eval(alpha).dp; }
  double d2p(double alpha) const { return eval(alpha).d2p; }

  /// ∫_{α₁}^{α₂} p dα.
  double integral(double a1, double a2) const {
    return std::visit([&](const auto& rep) { return integral_rep(rep, a1, a2); }, rep_);
  }

  bool centrally_symmetric() const { return symmetric_; }
  const Representation& representation() const { return rep_; }

  /// γ(α) = p(α)(cos α, sin α) + p′(α)(−sin α, cos α).
  PlanePoint point_at(double alpha) const {
    const SupportValue v = eval(alpha);
    return v.p * unit_normal(alpha) + v.dp * unit_tangent(alpha);
  }

  /// ρ = p″ + p.
  double curvature_radius(double alpha) const {
    const SupportValue v = eval(alpha);
    return v.p + v.d2p;
  }

  /// Length of the arc of γ between normal directions α₁ < α₂ ≤ α₁ + 2π.
  double arc_length(double a1, double a2) const {
    if (!(a2 > a1) || a2 - a1 > kTwoPi + 1e-12) throw DomainError("arc_length needs α₁ < α₂ ≤ α₁ + 2π");
    return dp(a2) - dp(a1) + integral(a1, a2);
  }

  double perimeter() const { return integral(0.0, kTwoPi); }

  /// Tangency angles of the two tangent lines through an exterior point M.
  /// α₁ ∈ [0, 2π) bounds the arc of normals for which M lies beyond the
  /// support line on its clockwise end; α₂ = α₁ + ω with 0 < ω < π.
  std::pair<double, double> tangent_angles_from(const PlanePoint& m) const {
    constexpr std::size_t n = kValidationGrid;
    auto g = [&](double a) { return m.x() * std::cos(a) + m.y() * std::sin(a) - p(a); };
    auto dg = [&](double a) { return -m.x() * std::sin(a) + m.y() * std::cos(a) - dp(a); };
    const double step = kTwoPi / static_cast<double>(n);
    std::vector<double> gv(n);
    std::size_t imax = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gv[i] = g(step * static_cast<double>(i));
      if (gv[i] > gv[imax]) imax = i;
    }
    // Local maximiser of g near the best node (M may see only a sliver of normals).
    double amax = step * static_cast<double>(imax);
    double gmax = gv[imax];
    {
      double lo = amax - step, hi = amax + step;
      for (int it = 0; it < 80; ++it) {
        const double m1 = lo + (hi - lo) * 0.381966011250105;
        const double m2 = hi - (hi - lo) * 0.381966011250105;
        if (g(m1) < g(m2)) lo = m1; else hi = m2;
      }
      const double cand = 0.5 * (lo + hi);
      if (g(cand) > gmax) {
        amax = cand;
        gmax = g(cand);
      }
    }
    const double scale = std::max({1.0, m.norm(), std::abs(p(amax))});
    if (!(gmax > 1e-13 * scale)) throw ContainmentError("point is inside or on the oval");
    // Walk left/right from the maximiser to the sign changes.
    auto find_crossing = [&](double dir) {
      double a = amax;
      for (std::size_t k = 0; k < n; ++k) {
        const double b = a + dir * step;
        if (g(b) <= 0.0) {
          const double lo = std::min(a, b), hi = std::max(a, b);
          return numeric::bracketed_root(g, dg, lo, hi, {1e-16, 200, 2});
        }
        a = b;
      }
      throw ContainmentError("no tangent line through point");
    };
    const double a1 = find_crossing(-1.0);
    const double a2 = find_crossing(+1.0);
    const double base = wrap_angle(a1);
    double omega = a2 - a1;
    return {base, base + omega};
  }

  /// Checks p > 0, p + p″ > 0 and periodicity on the validation grid with
  /// three levels of refinement around each minimum.
  ValidationReport validate() const {
    constexpr std::size_t n = kValidationGrid;
    const double step = kTwoPi / static_cast<double>(n);
    ValidationReport r;
    r.min_p = std::numeric_limits<double>::infinity();
    r.min_curvature_radius = std::numeric_limits<double>::infinity();
    std::size_t ip = 0, irho = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = step * static_cast<double>(i);
      const SupportValue v = eval(a);
      const double rho = v.p + v.d2p;
      if (!std::isfinite(v.p) || !std::isfinite(v.dp) || !std::isfinite(v.d2p)) {
        r.failures.push_back("non-finite support value");
        r.passed = false;
        return r;
      }
      if (v.p < r.min_p) {
        r.min_p = v.p;
        ip = i;
      }
      if (rho < r.min_curvature_radius) {
        r.min_curvature_radius = rho;
        irho = i;
      }
      const SupportValue w = eval(a + kTwoPi);
      r.max_periodicity_defect =
          std::max({r.max_periodicity_defect, std::abs(w.p - v.p), std::abs(w.dp - v.dp), std::abs(w.d2p - v.d2p)});
    }
    r.min_p_at = step * static_cast<double>(ip);
    r.min_curvature_radius_at = step * static_cast<double>(irho);
    auto refine = [&](double center, auto&& fn, double& best, double& best_at) {
      double width = step;
      for (int level = 0; level < 3; ++level) {
        const double c = best_at;
        for (int k = -8; k <= 8; ++k) {
          const double a = c + width * static_cast<double>(k) / 8.0;
          const double v = fn(a);
          if (v < best) {
            best = v;
            best_at = a;
          }
        }
        width /= 8.0;
      }
      (void)center;
    };
    refine(r.min_p_at, [&](double a) { return p(a); }, r.min_p, r.min_p_at);
    refine(r.min_curvature_radius_at, [&](double a) { return curvature_radius(a); }, r.min_curvature_radius,
           r.min_curvature_radius_at);
    r.min_p_at = wrap_angle(r.min_p_at);
    r.min_curvature_radius_at = wrap_angle(r.min_curvature_radius_at);
    if (!(r.min_p > 0.0)) r.failures.push_back("support function not positive (origin not interior)");
    if (!(r.min_curvature_radius > 0.0)) r.failures.push_back("curvature radius p''+p not positive (not strictly convex)");
    if (r.max_periodicity_defect > 1e-10) r.failures.push_back("support function not 2π-periodic");
    r.passed = r.failures.empty();
    return r;
  }

  /// Throws ValidationError naming the first failed invariant.
  const SupportOval& require_valid() const {
    const ValidationReport r = validate();
    if (!r.passed) throw ValidationError(r.failures.front());
    return *this;
  }

  /// Uniform samples of p, the portable form of any representation.
  std::vector<double> sample(std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = p(kTwoPi * static_cast<double>(j) / static_cast<double>(n));
    return out;
  }

 private:
  SupportOval(Representation rep, bool symmetric) : rep_(std::move(rep)), symmetric_(symmetric) {}

  static SupportValue eval_rep(const FourierSupport& f, double alpha) {
    SupportValue v{f.a0, 0.0, 0.0};
    const double c1 = std::cos(alpha), s1 = std::sin(alpha);
    double c = c1, s = s1;
    for (std::size_t i = 0; i < f.cos.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      const double a = f.cos[i], b = f.sin[i];
      v.p += a * c + b * s;
      v.dp += k * (b * c - a * s);
      v.d2p -= k * k * (a * c + b * s);
      if (((i + 1) & 31u) == 0u) {
        c = std::cos((k + 1.0) * alpha);
        s = std::sin((k + 1.0) * alpha);
      } else {
        const double nc = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = nc;
      }
    }
    return v;
  }
  static SupportValue eval_rep(const SampledSupport& s, double alpha) {
    const auto v = s.spline.eval(alpha);
    return {v.f, v.df, v.d2f};
  }
  static SupportValue eval_rep(const FunctionSupport& f, double alpha) { return (*f.eval)(alpha); }

  static double integral_rep(const FourierSupport& f, double a1, double a2) {
    double sum = f.a0 * (a2 - a1);
    for (std::size_t i = 0; i < f.cos.size(); ++i) {
      const double k = static_cast<double>(i + 1);
      sum += (f.cos[i] * (std::sin(k * a2) - std::sin(k * a1)) - f.sin[i] * (std::cos(k * a2) - std::cos(k * a1))) / k;
    }
    return sum;
  }
  static double integral_rep(const SampledSupport& s, double a1, double a2) { return s.spline.integral(a1, a2); }
  static double integral_rep(const FunctionSupport& f, double a1, double a2) {
    return numeric::integrate_aligned([&](double a) { return (*f.eval)(a).p; }, a1, a2, kPi / 64.0);
  }

  Representation rep_;
  bool symmetric_ = false;
};

}  // namespace olb
