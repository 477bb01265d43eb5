#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "olb/billiard_map.hpp"
#include "olb/errors.hpp"
#include "olb/genfun.hpp"
#include "olb/numeric.hpp"
#include "olb/support_oval.hpp"

namespace olb {

/// Circumscribed n-gon winding m times: α₁ < … < αₙ < α₁ + 2πm.
struct PeriodicOrbit {
  int n = 0;
  int m = 1;
  std::vector<double> angles;
  double residual = 0.0;
  double perimeter = 0.0;
  double action = 0.0;
  double closure = 0.0;
  int iterations = 0;
};

inline constexpr double kOrbitGapMin = 1e-3;
inline constexpr double kOrbitGapMax = kPi - 1e-3;

namespace detail {

inline void require_orbit_shape(int n, int m) {
  if (n < 3) throw DomainError("period n must be at least 3");
  if (m < 1) throw DomainError("rotation index m must be positive");
  if (2 * m >= n) throw DomainError("need 2πm/n < π (gaps must stay below π)");
  if (std::gcd(n, m) != 1) throw DomainError("n and m must be coprime");
}

inline double angle_at(const std::vector<double>& a, int m, long i) {
  const long n = static_cast<long>(a.size());
  const long q = (i >= 0) ? i / n : -((-i + n - 1) / n);
  return a[static_cast<std::size_t>(i - q * n)] + kTwoPi * static_cast<double>(m * q);
}

inline bool gaps_within(const std::vector<double>& a, int m, double lo, double hi) {
  const long n = static_cast<long>(a.size());
  for (long i = 0; i < n; ++i) {
    const double g = angle_at(a, m, i + 1) - angle_at(a, m, i);
    if (!(g > lo && g < hi)) return false;
  }
  return true;
}

}  // namespace detail

inline void require_gaps(const std::vector<double>& angles, int m) {
  if (angles.size() < 3) throw DomainError("need at least 3 angles");
  if (!detail::gaps_within(angles, m, kMinGap, kPi - kMinGap))
    throw DomainError("angle gaps must lie in (0, π) and advance by 2πm");
}

/// Σ S(αᵢ, αᵢ₊₁) with α_{n+1} = α₁ + 2πm.
inline double total_action(const SupportOval& oval, const std::vector<double>& angles, int m) {
  require_gaps(angles, m);
  double sum = 0.0;
  const long n = static_cast<long>(angles.size());
  for (long i = 0; i < n; ++i)
    sum += generating_S(oval, {detail::angle_at(angles, m, i), detail::angle_at(angles, m, i + 1)});
  return sum;
}

/// Perimeter of the circumscribed polygon: action + m·|γ|.
inline double circumscribed_perimeter(const SupportOval& oval, const std::vector<double>& angles, int m) {
  return total_action(oval, angles, m) + static_cast<double>(m) * oval.perimeter();
}

/// ∂/∂αᵢ of the action: R₂(αᵢ₋₁, αᵢ) − R₁(αᵢ, αᵢ₊₁).
inline Eigen::VectorXd action_gradient(const SupportOval& oval, const std::vector<double>& angles, int m) {
  const long n = static_cast<long>(angles.size());
  std::vector<std::pair<double, double>> r(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i)
    r[static_cast<std::size_t>(i)] = radii(oval, {detail::angle_at(angles, m, i), detail::angle_at(angles, m, i + 1)});
  Eigen::VectorXd g(n);
  for (long i = 0; i < n; ++i) {
    const auto prev = static_cast<std::size_t>((i + n - 1) % n);
    g(i) = r[prev].second - r[static_cast<std::size_t>(i)].first;
  }
  return g;
}

/// Cyclic tridiagonal Hessian of the action.
inline Eigen::MatrixXd action_hessian(const SupportOval& oval, const std::vector<double>& angles, int m) {
  const long n = static_cast<long>(angles.size());
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  for (long i = 0; i < n; ++i) {
    const Hessian c = hess_S(oval, {detail::angle_at(angles, m, i), detail::angle_at(angles, m, i + 1)});
    const long j = (i + 1) % n;
    h(i, i) += c.S11;
    h(j, j) += c.S22;
    h(i, j) += c.S12;
    h(j, i) += c.S12;
  }
  return h;
}

/// Cyclic relabelling so that the first angle is the smallest one mod 2π,
/// reduced into [0, 2π).
inline std::vector<double> canonicalize(const std::vector<double>& angles, int m) {
  const long n = static_cast<long>(angles.size());
  long best = 0;
  for (long i = 1; i < n; ++i)
    if (wrap_angle(angles[static_cast<std::size_t>(i)]) < wrap_angle(angles[static_cast<std::size_t>(best)])) best = i;
  const double shift = wrap_angle(angles[static_cast<std::size_t>(best)]) - angles[static_cast<std::size_t>(best)];
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = detail::angle_at(angles, m, best + k) + shift;
  return out;
}

/// Regular star-polygon angles α₁ + 2πm·i/n.
inline std::vector<double> regular_angles(int n, int m, double alpha1 = 0.0) {
  std::vector<double> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = alpha1 + kTwoPi * m * i / static_cast<double>(n);
  return a;
}

struct NewtonOptions {
  double tol = 1e-11;
  int max_iterations = 100;
  int max_projections = 3;
  bool verify = true;
  double closure_tol = 1e-8;
};

/// n steps of the map from (α₁, α₂) compared with (α₁, α₂) + 2πm.
inline double orbit_closure(const SupportOval& oval, const std::vector<double>& angles, int m) {
  const int n = static_cast<int>(angles.size());
  LinePairState s{angles[0], angles[1]};
  for (int k = 0; k < n; ++k) s = step(oval, s);
  const double shift = kTwoPi * m;
  return std::max(std::abs(s.alpha1 - angles[0] - shift), std::abs(s.alpha2 - angles[1] - shift));
}

/// Newton on the action gradient with backtracking and gap projection.
/// The Newton system is solved through the SVD pseudo-inverse so that the
/// rotational null direction of symmetric tables is ignored.
inline PeriodicOrbit find_periodic(const SupportOval& oval, int n, int m, std::vector<double> seed = {},
                                   const NewtonOptions& opt = {}) {
  detail::require_orbit_shape(n, m);
  if (seed.empty()) seed = regular_angles(n, m);
  if (static_cast<int>(seed.size()) != n) throw DomainError("seed must contain n angles");
  if (!detail::gaps_within(seed, m, kOrbitGapMin, kOrbitGapMax)) throw DomainError("seed gaps outside (1e-3, π−1e-3)");

  std::vector<double> a = seed;
  Eigen::VectorXd g = action_gradient(oval, a, m);
  int projections = 0;
  int it = 0;
  for (; it < opt.max_iterations && g.lpNorm<Eigen::Infinity>() >= opt.tol; ++it) {
    const Eigen::MatrixXd h = action_hessian(oval, a, m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(h, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    const Eigen::VectorXd d = -svd.solve(g);
    double t = 1.0;
    bool projected = false;
    std::vector<double> trial(a.size());
    auto make_trial = [&](double tt) {
      for (std::size_t i = 0; i < a.size(); ++i) trial[i] = a[i] + tt * d(static_cast<Eigen::Index>(i));
    };
    make_trial(t);
    while (!detail::gaps_within(trial, m, kOrbitGapMin, kOrbitGapMax)) {
      projected = true;
      t *= 0.5;
      if (t < 1e-12) throw ConvergenceError("periodic orbit gaps collapsed");
      make_trial(t);
    }
    if (projected && ++projections > opt.max_projections)
      throw ConvergenceError("periodic orbit left the gap domain repeatedly");
    Eigen::VectorXd gt = action_gradient(oval, trial, m);
    const double g0 = g.norm();
    while (gt.norm() > (1.0 - 1e-4 * t) * g0 && t > 1.0 / 1024.0) {
      t *= 0.5;
      make_trial(t);
      gt = action_gradient(oval, trial, m);
    }
    a = trial;
    g = gt;
  }
  const double res = g.lpNorm<Eigen::Infinity>();
  if (!(res < opt.tol)) throw ConvergenceError("periodic orbit Newton did not converge (residual " + std::to_string(res) + ")");

  PeriodicOrbit o;
  o.n = n;
  o.m = m;
  o.angles = canonicalize(a, m);
  o.residual = action_gradient(oval, o.angles, m).lpNorm<Eigen::Infinity>();
  o.action = total_action(oval, o.angles, m);
  o.perimeter = o.action + static_cast<double>(m) * oval.perimeter();
  o.iterations = it;
  if (opt.verify) {
    o.closure = orbit_closure(oval, o.angles, m);
    if (!(o.closure < opt.closure_tol)) throw ConvergenceError("periodic orbit does not close under the map");
  }
  return o;
}

/// Derivative-free multi-start minimisation of the action over
/// (α₁, gap₁, …, gap_{n−1}); the last gap is 2πm − Σ. Best effort.
inline PeriodicOrbit brute_oracle(const SupportOval& oval, int n, int m, int grid_density, std::uint64_t seed = 7) {
  detail::require_orbit_shape(n, m);
  const double mean_gap = kTwoPi * m / n;
  auto unpack = [&](const std::vector<double>& x) {
    std::vector<double> a(static_cast<std::size_t>(n));
    a[0] = x[0];
    for (int i = 1; i < n; ++i) a[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i - 1)] + x[static_cast<std::size_t>(i)];
    return a;
  };
  auto objective = [&](const std::vector<double>& x) {
    double sum = 0.0, penalty = 0.0;
    for (int i = 1; i < n; ++i) sum += x[static_cast<std::size_t>(i)];
    const double last = kTwoPi * m - sum;
    auto over = [&](double g) {
      if (g <= kOrbitGapMin) penalty += kOrbitGapMin - g + 1.0;
      if (g >= kOrbitGapMax) penalty += g - kOrbitGapMax + 1.0;
    };
    for (int i = 1; i < n; ++i) over(x[static_cast<std::size_t>(i)]);
    over(last);
    if (penalty > 0.0) return 1e6 * (1.0 + penalty);
    return total_action(oval, unpack(x), m);
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<double> best_x;
  double best_f = std::numeric_limits<double>::infinity();
  const int starts = std::max(1, grid_density);
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x(static_cast<std::size_t>(n));
    x[0] = mean_gap * s / starts;
    for (int i = 1; i < n; ++i) x[static_cast<std::size_t>(i)] = mean_gap * (1.0 + (s == 0 ? 0.0 : jitter(rng)));
    const double f0 = objective(x);
    if (f0 >= 1e6) continue;
    auto r = numeric::nelder_mead(objective, x, 0.05, 1e-12, 1e-16, 40000);
    for (int restart = 0; restart < 3; ++restart) {
      auto r2 = numeric::nelder_mead(objective, r.x, 1e-3, 1e-12, 1e-16, 40000);
      if (!(r2.f < r.f)) break;
      r = r2;
    }
    if (r.f < best_f) {
      best_f = r.f;
      best_x = r.x;
    }
  }
  if (best_x.empty()) throw ConvergenceError("brute oracle found no admissible start");
  PeriodicOrbit o;
  o.n = n;
  o.m = m;
  o.angles = canonicalize(unpack(best_x), m);
  o.action = best_f;
  o.perimeter = best_f + static_cast<double>(m) * oval.perimeter();
  o.residual = action_gradient(oval, o.angles, m).lpNorm<Eigen::Infinity>();
  return o;
}

struct ScanSample {
  double alpha1 = 0.0;
  double residual = std::numeric_limits<double>::quiet_NaN();
  bool solved = false;
  std::vector<double> angles;
};

struct ScanReport {
  int n = 0;
  int m = 1;
  double tol = 1e-8;
  std::vector<ScanSample> samples;
  double max_abs_residual = 0.0;
  std::size_t sign_changes = 0;
  std::size_t longest_closed_run = 0;
  std::size_t closed_count = 0;
  std::size_t newton_failures = 0;
  bool all_closed = false;
};

namespace detail {

/// Solves g₂ = … = gₙ = 0 with α₁ fixed; returns false on failure.
inline bool complete_chain(const SupportOval& oval, int m, std::vector<double>& a, double tol = 1e-13) {
  const long n = static_cast<long>(a.size());
  for (int it = 0; it < 60; ++it) {
    if (!gaps_within(a, m, kOrbitGapMin, kOrbitGapMax)) return false;
    const Eigen::VectorXd g = action_gradient(oval, a, m).tail(n - 1);
    if (g.lpNorm<Eigen::Infinity>() < tol) return true;
    const Eigen::MatrixXd h = action_hessian(oval, a, m).bottomRightCorner(n - 1, n - 1);
    const Eigen::VectorXd d = -h.partialPivLu().solve(g);
    double t = 1.0;
    std::vector<double> trial = a;
    for (;;) {
      for (long i = 1; i < n; ++i) trial[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)] + t * d(i - 1);
      if (gaps_within(trial, m, kOrbitGapMin, kOrbitGapMax)) {
        const double gn = action_gradient(oval, trial, m).tail(n - 1).norm();
        if (gn < g.norm() || t < 1.0 / 256.0) break;
      }
      t *= 0.5;
      if (t < 1e-10) return false;
    }
    a = trial;
  }
  return action_gradient(oval, a, m).tail(n - 1).lpNorm<Eigen::Infinity>() < 1e3 * tol;
}

}  // namespace detail

/// For each α₁ on a uniform grid of [0, 2π), completes the n-chain with the
/// other n − 1 conditions and records the remaining gradient component g₁.
/// An orbit closes at α₁ when |g₁| < tol.
inline ScanReport invariant_curve_scan(const SupportOval& oval, int n, int m, std::size_t samples, double tol = 1e-8,
                                       unsigned workers = 1) {
  detail::require_orbit_shape(n, m);
  if (samples == 0) throw DomainError("scan needs at least one sample");
  ScanReport rep;
  rep.n = n;
  rep.m = m;
  rep.tol = tol;
  rep.samples.resize(samples);
  numeric::parallel_chunks(samples, workers, [&](std::size_t b, std::size_t e) {
    std::vector<double> prev;
    for (std::size_t k = b; k < e; ++k) {
      const double a1 = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
      ScanSample& s = rep.samples[k];
      s.alpha1 = a1;
      std::vector<double> a;
      bool ok = false;
      if (!prev.empty()) {
        a = prev;
        const double shift = a1 - prev[0];
        for (double& v : a) v += shift;
        ok = detail::complete_chain(oval, m, a);
      }
      if (!ok) {
        a = regular_angles(n, m, a1);
        ok = detail::complete_chain(oval, m, a);
      }
      if (ok) {
        s.solved = true;
        s.residual = action_gradient(oval, a, m)(0);
        s.angles = a;
        prev = a;
      } else {
        prev.clear();
      }
    }
  });
  std::size_t run = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const ScanSample& s = rep.samples[k];
    if (!s.solved) {
      ++rep.newton_failures;
      run = 0;
      continue;
    }
    rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(s.residual));
    const ScanSample& nx = rep.samples[(k + 1) % samples];
    if (nx.solved && (s.residual > 0.0) != (nx.residual > 0.0)) ++rep.sign_changes;
    if (std::abs(s.residual) < tol) {
      ++rep.closed_count;
      rep.longest_closed_run = std::max(rep.longest_closed_run, ++run);
    } else {
      run = 0;
    }
  }
  // A closed run may wrap around α₁ = 0.
  if (rep.closed_count == samples) {
    rep.longest_closed_run = samples;
  } else if (rep.samples.front().solved && std::abs(rep.samples.front().residual) < tol) {
    std::size_t head = 0, tail = 0;
    while (head < samples && rep.samples[head].solved && std::abs(rep.samples[head].residual) < tol) ++head;
    while (tail < samples && rep.samples[samples - 1 - tail].solved &&
           std::abs(rep.samples[samples - 1 - tail].residual) < tol)
      ++tail;
    rep.longest_closed_run = std::max(rep.longest_closed_run, head + tail);
  }
  rep.all_closed = rep.newton_failures == 0 && rep.closed_count == samples;
  return rep;
}

}  // namespace olb
