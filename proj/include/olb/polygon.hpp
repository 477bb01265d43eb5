#pragma once

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "olb/dual.hpp"
#include "olb/errors.hpp"
#include "olb/geometry.hpp"

namespace olb {

/// Convex n-gon by the support coordinates (αᵢ, pᵢ) of its sides, αᵢ
/// increasing counterclockwise with gaps in (0, π) summing to 2π.
struct PolygonConfig {
  std::vector<double> alpha;
  std::vector<double> p;

  std::size_t size() const { return alpha.size(); }

  /// Index reduced mod n.
  std::size_t idx(long i) const {
    const long n = static_cast<long>(alpha.size());
    return static_cast<std::size_t>(((i % n) + n) % n);
  }

  /// αᵢ₊₁ − αᵢ, with the last gap closing the turn.
  double gap(long i) const {
    const std::size_t a = idx(i), b = idx(i + 1);
    return b == 0 ? alpha[0] + kTwoPi - alpha[a] : alpha[b] - alpha[a];
  }

  void validate() const {
    if (alpha.size() < 3 || alpha.size() != p.size()) throw DomainError("polygon needs n ≥ 3 sides with matching α and p");
    double total = 0.0;
    for (long i = 0; i < static_cast<long>(size()); ++i) {
      const double g = gap(i);
      if (!(g > 0.0 && g < kPi)) throw DomainError("polygon gaps must lie in (0, π)");
      total += g;
    }
    if (std::abs(total - kTwoPi) > 1e-9) throw DomainError("polygon normals must turn once");
  }
};

/// Tangent vector over the basis {∂α₁ … ∂αₙ, ∂p₁ … ∂pₙ}.
struct TangentVectorField {
  Eigen::VectorXd d_alpha;
  Eigen::VectorXd d_p;

  static TangentVectorField zero(std::size_t n) {
    return {Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  }
  Eigen::VectorXd stacked() const {
    Eigen::VectorXd v(d_alpha.size() + d_p.size());
    v << d_alpha, d_p;
    return v;
  }
};

inline PolygonConfig regular_polygon(std::size_t n, double r = 1.0, double phase = 0.0) {
  PolygonConfig poly;
  for (std::size_t i = 0; i < n; ++i) {
    poly.alpha.push_back(phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n));
    poly.p.push_back(r);
  }
  return poly;
}

/// Same polygon with the origin moved to `c`.
inline PolygonConfig recentered(const PolygonConfig& poly, const PlanePoint& c) {
  PolygonConfig out = poly;
  for (std::size_t i = 0; i < poly.size(); ++i) out.p[i] -= c.dot(unit_normal(poly.alpha[i]));
  return out;
}

/// V_{i+1/2}, the vertex between sides i and i + 1.
inline PlanePoint vertex_after(const PolygonConfig& poly, long i) {
  const std::size_t a = poly.idx(i), b = poly.idx(i + 1);
  const double s = std::sin(poly.gap(i));
  const double aa = poly.alpha[a], ab = poly.alpha[b];
  return PlanePoint{poly.p[a] * std::sin(ab) - poly.p[b] * std::sin(aa), poly.p[b] * std::cos(aa) - poly.p[a] * std::cos(ab)} / s;
}

inline std::vector<PlanePoint> vertices(const PolygonConfig& poly) {
  poly.validate();
  std::vector<PlanePoint> v;
  for (long i = 0; i < static_cast<long>(poly.size()); ++i) v.push_back(vertex_after(poly, i));
  return v;
}

struct SideLengths {
  std::vector<double> sides;
  double perimeter = 0.0;
};

/// Side i joins V_{i−1/2} and V_{i+1/2}; perimeter Σ (pᵢ + pᵢ₊₁) tan(gᵢ/2).
inline SideLengths side_length_and_perimeter(const PolygonConfig& poly) {
  poly.validate();
  SideLengths out;
  const long n = static_cast<long>(poly.size());
  for (long i = 0; i < n; ++i) {
    const double gm = poly.gap(i - 1), gp = poly.gap(i);
    const double pm = poly.p[poly.idx(i - 1)], pi = poly.p[poly.idx(i)], pp = poly.p[poly.idx(i + 1)];
    out.sides.push_back(pm / std::sin(gm) + pp / std::sin(gp) - pi * std::sin(gm + gp) / (std::sin(gm) * std::sin(gp)));
    out.perimeter += (pi + pp) * std::tan(0.5 * gp);
  }
  return out;
}

/// Φ from the data of sides i − 1, i, i + 1 (gaps g₋ = αᵢ − αᵢ₋₁, g₊ = αᵢ₊₁ − αᵢ).
template <class T>
T phi_local(T g_minus, T g_plus, T p_minus, T p_i, T p_plus) {
  using std::cos;
  using std::sin;
  const T cm = cos(g_minus * 0.5), cp = cos(g_plus * 0.5);
  return (cm * cm * (p_plus + p_i) - cp * cp * (p_minus + p_i)) / (sin((g_minus + g_plus) * 0.5) * cm * cp * 2.0);
}

inline double phi(const PolygonConfig& poly, long i) {
  return phi_local<double>(poly.gap(i - 1), poly.gap(i), poly.p[poly.idx(i - 1)], poly.p[poly.idx(i)],
                           poly.p[poly.idx(i + 1)]);
}

/// Cᵢ = (cot β₋ V₊ + cot β₊ V₋)/(cot β₋ + cot β₊), β± half the adjacent gaps.
inline PlanePoint tangency_point(const PolygonConfig& poly, long i) {
  const double cm = 1.0 / std::tan(0.5 * poly.gap(i - 1)), cp = 1.0 / std::tan(0.5 * poly.gap(i));
  return (cm * vertex_after(poly, i) + cp * vertex_after(poly, i - 1)) / (cm + cp);
}

/// Φᵢ as the determinant [(cos αᵢ, sin αᵢ), Cᵢ].
inline double phi_via_tangency(const PolygonConfig& poly, long i) {
  return cross(unit_normal(poly.alpha[poly.idx(i)]), tangency_point(poly, i));
}

/// dp-component of the infinitesimal counterclockwise rotation of the line
/// with normal angle α about `point` (the dα-component is 1).
inline double rotation_field(const PlanePoint& point, double alpha) {
  return point.y() * std::cos(alpha) - point.x() * std::sin(alpha);
}

/// Partial derivatives of Φᵢ with respect to (αᵢ₋₁, αᵢ, αᵢ₊₁) and (pᵢ₋₁, pᵢ, pᵢ₊₁).
struct PhiPartials {
  std::array<double, 3> d_alpha{};
  std::array<double, 3> d_p{};
};

inline PhiPartials phi_partials(const PolygonConfig& poly, long i) {
  const double gm = poly.gap(i - 1), gp = poly.gap(i);
  const double pm = poly.p[poly.idx(i - 1)], pi = poly.p[poly.idx(i)], pp = poly.p[poly.idx(i + 1)];
  PhiPartials out;
  // α-directions: ∂/∂αᵢ₋₁ = −∂/∂g₋, ∂/∂αᵢ = ∂/∂g₋ − ∂/∂g₊, ∂/∂αᵢ₊₁ = ∂/∂g₊.
  const double dgm = phi_local<Dual>({gm, 1.0}, gp, pm, pi, pp).d;
  const double dgp = phi_local<Dual>(gm, {gp, 1.0}, pm, pi, pp).d;
  out.d_alpha = {-dgm, dgm - dgp, dgp};
  out.d_p = {phi_local<Dual>(gm, gp, {pm, 1.0}, pi, pp).d, phi_local<Dual>(gm, gp, pm, {pi, 1.0}, pp).d,
             phi_local<Dual>(gm, gp, pm, pi, {pp, 1.0}).d};
  return out;
}

/// ξᵢ = ∂αᵢ + Φᵢ ∂pᵢ.
inline TangentVectorField xi_field(const PolygonConfig& poly, long i) {
  TangentVectorField f = TangentVectorField::zero(poly.size());
  const auto k = static_cast<Eigen::Index>(poly.idx(i));
  f.d_alpha(k) = 1.0;
  f.d_p(k) = phi(poly, i);
  return f;
}

/// ξᵢ(Φⱼ) = ∂Φⱼ/∂αᵢ + Φᵢ ∂Φⱼ/∂pᵢ.
inline double xi_of_phi(const PolygonConfig& poly, long i, long j) {
  const long n = static_cast<long>(poly.size());
  const PhiPartials d = phi_partials(poly, j);
  const std::size_t ii = poly.idx(i);
  double da = 0.0, dp = 0.0;
  for (long off = -1; off <= 1; ++off) {
    if (poly.idx(j + off) != ii) continue;
    // For n = 3 every index is a neighbour; offsets are distinct mod n when n ≥ 3.
    da += d.d_alpha[static_cast<std::size_t>(off + 1)];
    dp += d.d_p[static_cast<std::size_t>(off + 1)];
  }
  (void)n;
  return da + phi(poly, i) * dp;
}

/// [ξᵢ, ξⱼ] = ξᵢ(Φⱼ) ∂pⱼ − ξⱼ(Φᵢ) ∂pᵢ (zero when i and j are not adjacent).
inline TangentVectorField xi_bracket(const PolygonConfig& poly, long i, long j) {
  TangentVectorField f = TangentVectorField::zero(poly.size());
  if (poly.idx(i) == poly.idx(j)) return f;
  f.d_p(static_cast<Eigen::Index>(poly.idx(j))) += xi_of_phi(poly, i, j);
  f.d_p(static_cast<Eigen::Index>(poly.idx(i))) -= xi_of_phi(poly, j, i);
  return f;
}

namespace detail {

/// Time-t flow of ξᵢ by RK4. Only αᵢ and pᵢ move.
inline PolygonConfig flow_xi(PolygonConfig poly, long i, double t, int substeps = 8) {
  const std::size_t k = poly.idx(i);
  const double dt = t / substeps;
  auto rhs = [&](double a, double pv) {
    PolygonConfig q = poly;
    q.alpha[k] = a;
    q.p[k] = pv;
    return phi(q, i);
  };
  for (int s = 0; s < substeps; ++s) {
    const double a = poly.alpha[k], pv = poly.p[k];
    const double k1 = rhs(a, pv);
    const double k2 = rhs(a + 0.5 * dt, pv + 0.5 * dt * k1);
    const double k3 = rhs(a + 0.5 * dt, pv + 0.5 * dt * k2);
    const double k4 = rhs(a + dt, pv + dt * k3);
    poly.alpha[k] = a + dt;
    poly.p[k] = pv + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
  }
  return poly;
}

inline TangentVectorField commutator_quotient(const PolygonConfig& poly, long i, long j, double h) {
  PolygonConfig q = flow_xi(poly, i, h);
  q = flow_xi(q, j, h);
  q = flow_xi(q, i, -h);
  q = flow_xi(q, j, -h);
  TangentVectorField f = TangentVectorField::zero(poly.size());
  for (std::size_t k = 0; k < poly.size(); ++k) {
    f.d_alpha(static_cast<Eigen::Index>(k)) = (q.alpha[k] - poly.alpha[k]) / (h * h);
    f.d_p(static_cast<Eigen::Index>(k)) = (q.p[k] - poly.p[k]) / (h * h);
  }
  return f;
}

}  // namespace detail

/// (φⱼ^{−h} ∘ φᵢ^{−h} ∘ φⱼ^{h} ∘ φᵢ^{h}(x) − x)/h², Richardson-extrapolated
/// between h and h/2.
inline TangentVectorField flow_commutator(const PolygonConfig& poly, long i, long j, double h = 1e-3) {
  const TangentVectorField a = detail::commutator_quotient(poly, i, j, h);
  const TangentVectorField b = detail::commutator_quotient(poly, i, j, 0.5 * h);
  return {2.0 * b.d_alpha - a.d_alpha, 2.0 * b.d_p - a.d_p};
}

struct GrowthReport {
  std::size_t n = 0;
  std::size_t span_rank = 0;   ///< rank of {ξᵢ} ∪ {[ξᵢ, ξᵢ₊₁]}
  std::size_t theta_rank = 0;  ///< rank of θⱼ([ξᵢ, ξᵢ₊₁])
  std::vector<double> singular_values;
  bool full_growth() const { return span_rank == 2 * n - 1; }
};

inline std::size_t numeric_rank(const Eigen::MatrixXd& m, std::vector<double>* sv = nullptr, double rel = 1e-8) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const Eigen::VectorXd s = svd.singularValues();
  if (sv) sv->assign(s.data(), s.data() + s.size());
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel * s(0)) ++r;
  return r;
}

inline GrowthReport growth_report(const PolygonConfig& poly) {
  poly.validate();
  const auto n = static_cast<long>(poly.size());
  GrowthReport r;
  r.n = poly.size();
  Eigen::MatrixXd span(2 * n, 2 * n);
  Eigen::MatrixXd theta(n, n);
  for (long i = 0; i < n; ++i) {
    span.col(i) = xi_field(poly, i).stacked();
    const TangentVectorField b = xi_bracket(poly, i, i + 1);
    span.col(n + i) = b.stacked();
    // θⱼ = dpⱼ − Φⱼ dαⱼ; brackets have no α-component.
    for (long j = 0; j < n; ++j) theta(j, i) = b.d_p(j) - phi(poly, j) * b.d_alpha(j);
  }
  r.span_rank = numeric_rank(span, &r.singular_values);
  r.theta_rank = numeric_rank(theta);
  return r;
}

/// D_ξᵢ F with F the perimeter: ∂F/∂αᵢ + Φᵢ ∂F/∂pᵢ.
inline double perimeter_derivative_along_xi(const PolygonConfig& poly, long i) {
  const double gm = poly.gap(i - 1), gp = poly.gap(i);
  const double pm = poly.p[poly.idx(i - 1)], pi = poly.p[poly.idx(i)], pp = poly.p[poly.idx(i + 1)];
  const double cm = std::cos(0.5 * gm), cp = std::cos(0.5 * gp);
  const double dF_dp = std::tan(0.5 * gp) + std::tan(0.5 * gm);
  const double dF_da = (pm + pi) / (2.0 * cm * cm) - (pi + pp) / (2.0 * cp * cp);
  return dF_da + phi(poly, i) * dF_dp;
}

/// Fields and forms on parallelograms in coordinates (α₁, α₂, p₁, p₂).
struct ParallelogramFields {
  Eigen::Vector4d xi1, xi2, bracket, lambda, dF;
};

inline ParallelogramFields parallelogram_fields(double alpha1, double alpha2) {
  const double w = alpha2 - alpha1;
  if (!(w > 0.0 && w < kPi)) throw DomainError("parallelogram gap ω outside (0, π)");
  const double c = std::cos(w), s = std::sin(w);
  ParallelogramFields f;
  f.xi1 << 1.0, 0.0, -c, 0.0;
  f.xi2 << 0.0, 1.0, 0.0, c;
  f.bracket << 0.0, 0.0, -s, s;
  f.lambda << c, c, 1.0, -1.0;
  f.dF << c, -c, 1.0, 1.0;
  return f;
}

/// The parallelogram (α₁, α₂, α₁ + π, α₂ + π; p₁, p₂, p₁, p₂) as a 4-gon.
inline PolygonConfig parallelogram_polygon(double alpha1, double alpha2, double p1, double p2) {
  return {{alpha1, alpha2, alpha1 + kPi, alpha2 + kPi}, {p1, p2, p1, p2}};
}

/// Incenter of a triangle given by support coordinates.
inline PlanePoint incenter(const PolygonConfig& tri) {
  if (tri.size() != 3) throw DomainError("incenter needs a triangle");
  // Equidistant from the three side lines: c·nᵢ + r = pᵢ.
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    a(i, 0) = std::cos(tri.alpha[static_cast<std::size_t>(i)]);
    a(i, 1) = std::sin(tri.alpha[static_cast<std::size_t>(i)]);
    a(i, 2) = 1.0;
    b(i) = tri.p[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector3d x = a.fullPivLu().solve(b);
  return {x(0), x(1)};
}

struct TriangleWU {
  std::array<double, 3> W{};
  std::array<double, 3> U{};
  double a = 0.0;
  double b = 0.0;
  double final_expression = 0.0;
};

/// Closed forms for the unit-incircle triangle with exterior half-angles
/// u, v, w (u + v + w = π).
inline TriangleWU triangle_WU(double u, double v, double w) {
  for (double x : {u, v, w})
    if (!(x > 0.0 && x < 0.5 * kPi)) throw DomainError("triangle half-angles must lie in (0, π/2)");
  if (std::abs(u + v + w - kPi) > 1e-12) throw DomainError("triangle half-angles must sum to π");
  const double tu = std::tan(u), tv = std::tan(v), tw = std::tan(w);
  const double s2u = std::sin(2.0 * u), s2v = std::sin(2.0 * v), s2w = std::sin(2.0 * w);
  TriangleWU r;
  r.W = {tu / s2v, tv / s2w, tw / s2u};
  r.U = {tw / s2v, tu / s2w, tv / s2u};
  r.a = -tv / tu;
  r.b = -tw / tu;
  const double cv = std::cos(v), cw = std::cos(w), su = std::sin(u);
  r.final_expression = -1.0 / (cw * cw * tu) - tw / (su * su) - tv / (cw * cw * tu * tu) - tv / (su * su) -
                       1.0 / (cv * cv * tu) - tw / (cv * cv * tu * tu);
  return r;
}

/// Unit-incircle triangle with α₂ − α₁ = 2u, α₃ − α₂ = 2v.
inline PolygonConfig incircle_triangle(double u, double v, double alpha1 = 0.0) {
  return {{alpha1, alpha1 + 2.0 * u, alpha1 + 2.0 * u + 2.0 * v}, {1.0, 1.0, 1.0}};
}

}  // namespace olb
