#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "olb/errors.hpp"

namespace olb::numeric {

/// 16-point Gauss–Legendre rule on [−1, 1].
struct GaussLegendre16 {
  static constexpr std::array<double, 8> kNodes = {
      0.0950125098376374401853193, 0.2816035507792589132304605, 0.4580167776572273863424194,
      0.6178762444026437484466718, 0.7554044083550030338951012, 0.8656312023878317438804679,
      0.9445750230732325760779884, 0.9894009349916499325961542};
  static constexpr std::array<double, 8> kWeights = {
      0.1894506104550684962853967, 0.1826034150449235888667637, 0.1691565193950025381893121,
      0.1495959888165767320815017, 0.1246289712555338720524763, 0.0951585116824927848099251,
      0.0622535239386478928628438, 0.0271524594117540948517806};

  template <class F>
  static double integrate(F&& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < kNodes.size(); ++i) {
      const double dx = half * kNodes[i];
      sum += kWeights[i] * (f(mid - dx) + f(mid + dx));
    }
    return sum * half;
  }
};

/// Composite Gauss–Legendre over panels aligned to multiples of `panel`
/// (so that breakpoints at multiples of the panel width are never straddled).
template <class F>
double integrate_aligned(F&& f, double a, double b, double panel) {
  if (b < a) return -integrate_aligned(f, b, a, panel);
  double sum = 0.0;
  double lo = a;
  while (lo < b) {
    double next = (std::floor(lo / panel + 1e-12) + 1.0) * panel;
    if (next <= lo) next += panel;
    const double hi = std::min(next, b);
    if (hi > lo) sum += GaussLegendre16::integrate(f, lo, hi);
    lo = hi;
  }
  return sum;
}

struct RootOptions {
  double x_tol = 1e-15;
  int max_bisection = 200;
  int polish_steps = 2;
};

/// Root of a continuous function on a sign-changing bracket [lo, hi].
/// Bisection to `x_tol`, then Newton polish when a derivative is supplied
/// (a polish step that leaves the bracket is discarded).
template <class F, class DF>
double bracketed_root(F&& f, DF&& df, double lo, double hi, const RootOptions& opt = {}) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw ConvergenceError("root not bracketed");
  const double a0 = lo, b0 = hi;
  for (int it = 0; it < opt.max_bisection && (hi - lo) > opt.x_tol * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int k = 0; k < opt.polish_steps; ++k) {
    const double d = df(x);
    if (!(std::abs(d) > 0.0)) break;
    const double nx = x - f(x) / d;
    if (!(nx >= a0 && nx <= b0)) break;
    x = nx;
  }
  return x;
}

/// Safeguarded Newton on a bracket; faster than bisection for smooth
/// monotone functions when a good derivative is available.
template <class F, class DF>
double safeguarded_newton(F&& f, DF&& df, double lo, double hi, double x0, double f_tol = 1e-15,
                          int max_iter = 100) {
  double flo = f(lo);
  double fhi = f(hi);
  if ((flo > 0.0) == (fhi > 0.0) && flo != 0.0 && fhi != 0.0) throw ConvergenceError("root not bracketed");
  const bool increasing = fhi > flo;
  double x = std::clamp(x0, lo, hi);
  for (int it = 0; it < max_iter; ++it) {
    const double fx = f(x);
    if (std::abs(fx) <= f_tol) return x;
    if ((fx > 0.0) == increasing) {
      hi = x;
    } else {
      lo = x;
    }
    const double d = df(x);
    double nx = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-16 * std::max(1.0, std::abs(x))) return nx;
    x = nx;
    if (hi - lo <= 1e-16 * std::max(1.0, std::abs(x))) return x;
  }
  return x;
}

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
};

/// Nelder–Mead simplex minimisation from x0 with initial edge `step`.
template <class F>
SimplexResult nelder_mead(F&& f, std::vector<double> x0, double step, double x_tol = 1e-11, double f_tol = 1e-16,
                          int max_evals = 20000) {
  const std::size_t n = x0.size();
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step;
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(pts[i]);
  std::vector<std::size_t> order(n + 1);
  auto affine = [&](const std::vector<double>& c, const std::vector<double>& x, double t) {
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = c[k] + t * (x[k] - c[k]);
    return out;
  };
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    double diam = 0.0;
    for (std::size_t i = 0; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k) diam = std::max(diam, std::abs(pts[i][k] - pts[best][k]));
    if (diam < x_tol && std::abs(fv[worst] - fv[best]) <= f_tol * std::max(1.0, std::abs(fv[best]))) break;
    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    }
    const auto xr = affine(centroid, pts[worst], -1.0);
    const double fr = eval(xr);
    if (fr < fv[best]) {
      const auto xe = affine(centroid, pts[worst], -2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      pts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const auto xc = outside ? affine(centroid, xr, 0.5) : affine(centroid, pts[worst], 0.5);
      const double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          pts[i] = affine(pts[best], pts[i], 0.5);
          fv[i] = eval(pts[i]);
        }
      }
    }
  }
  const auto it = std::min_element(fv.begin(), fv.end());
  const auto idx = static_cast<std::size_t>(it - fv.begin());
  return {pts[idx], fv[idx], evals};
}

/// Runs fn(begin, end) over contiguous chunks of [0, count) on `workers`
/// threads. Exceptions from workers are rethrown on the caller.
inline void parallel_chunks(std::size_t count, unsigned workers,
                            const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers == 1) {
    fn(0, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::jthread> pool;
  const std::size_t chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(count, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace olb::numeric
