#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "olb/errors.hpp"

namespace olb {

/// Periodic quintic B-spline interpolant of uniform samples y_j = f(j·h),
/// h = period / N. C⁴, exact for quintic polynomials locally, O(h⁶) error
/// for smooth periodic data.
class PeriodicQuinticSpline {
 public:
  struct Value {
    double f, df, d2f;
  };

  PeriodicQuinticSpline() = default;

  PeriodicQuinticSpline(std::vector<double> samples, double period)
      : samples_(std::move(samples)), period_(period) {
    const auto n = static_cast<Eigen::Index>(samples_.size());
    if (n < 8) throw DomainError("periodic quintic spline needs at least 8 samples");
    if (!(period > 0.0)) throw DomainError("spline period must be positive");
    h_ = period_ / static_cast<double>(n);

    // (c_{j-2} + 26 c_{j-1} + 66 c_j + 26 c_{j+1} + c_{j+2}) / 120 = y_j, cyclic.
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(5 * n));
    const std::array<double, 5> stencil = {1.0, 26.0, 66.0, 26.0, 1.0};
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int k = -2; k <= 2; ++k) {
        const Eigen::Index col = ((j + k) % n + n) % n;
        trip.emplace_back(j, col, stencil[static_cast<std::size_t>(k + 2)] / 120.0);
      }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(a);
    if (solver.info() != Eigen::Success) throw ConvergenceError("spline factorization failed");
    Eigen::Map<const Eigen::VectorXd> y(samples_.data(), n);
    Eigen::VectorXd c = solver.solve(y);
    coeffs_.assign(c.data(), c.data() + n);

    // Cumulative integral at the knots; 3-point Gauss is exact on quintic pieces.
    prefix_.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (Eigen::Index j = 0; j < n; ++j)
      prefix_[static_cast<std::size_t>(j) + 1] = prefix_[static_cast<std::size_t>(j)] + segment_integral(j, 0.0, 1.0);
  }

  std::size_t size() const { return samples_.size(); }
  double period() const { return period_; }
  const std::vector<double>& samples() const { return samples_; }

  Value eval(double x) const {
    std::size_t seg;
    double t;
    locate(x, seg, t);
    return eval_local(seg, t);
  }

  /// ∫_a^b f(x) dx for any a ≤ b (periodic extension).
  double integral(double a, double b) const {
    return antiderivative(b) - antiderivative(a);
  }

 private:
  void locate(double x, std::size_t& seg, double& t) const {
    double r = std::fmod(x, period_);
    if (r < 0.0) r += period_;
    const double u = r / h_;
    double fl = std::floor(u);
    if (fl >= static_cast<double>(coeffs_.size())) fl = 0.0;
    seg = static_cast<std::size_t>(fl);
    t = u - fl;
  }

  double coeff(std::ptrdiff_t j) const {
    const auto n = static_cast<std::ptrdiff_t>(coeffs_.size());
    return coeffs_[static_cast<std::size_t>(((j % n) + n) % n)];
  }

  Value eval_local(std::size_t seg, double t) const {
    const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
    const double s = 1.0 - t;
    const std::array<double, 6> b = {
        s * s * s * s * s,
        26.0 - 50.0 * t + 20.0 * t2 + 20.0 * t3 - 20.0 * t4 + 5.0 * t5,
        66.0 - 60.0 * t2 + 30.0 * t4 - 10.0 * t5,
        26.0 + 50.0 * t + 20.0 * t2 - 20.0 * t3 - 20.0 * t4 + 10.0 * t5,
        1.0 + 5.0 * t + 10.0 * t2 + 10.0 * t3 + 5.0 * t4 - 5.0 * t5,
        t5};
    const std::array<double, 6> db = {
        -5.0 * s * s * s * s,
        -50.0 + 40.0 * t + 60.0 * t2 - 80.0 * t3 + 25.0 * t4,
        -120.0 * t + 120.0 * t3 - 50.0 * t4,
        50.0 + 40.0 * t - 60.0 * t2 - 80.0 * t3 + 50.0 * t4,
        5.0 + 20.0 * t + 30.0 * t2 + 20.0 * t3 - 25.0 * t4,
        5.0 * t4};
    const std::array<double, 6> d2b = {
        20.0 * s * s * s,
        40.0 + 120.0 * t - 240.0 * t2 + 100.0 * t3,
        -120.0 + 360.0 * t2 - 200.0 * t3,
        40.0 - 120.0 * t - 240.0 * t2 + 200.0 * t3,
        20.0 + 60.0 * t + 60.0 * t2 - 100.0 * t3,
        20.0 * t3};
    Value v{0.0, 0.0, 0.0};
    const auto base = static_cast<std::ptrdiff_t>(seg) - 2;
    for (std::size_t k = 0; k < 6; ++k) {
      const double c = coeff(base + static_cast<std::ptrdiff_t>(k));
      v.f += c * b[k];
      v.df += c * db[k];
      v.d2f += c * d2b[k];
    }
    v.f /= 120.0;
    v.df /= 120.0 * h_;
    v.d2f /= 120.0 * h_ * h_;
    return v;
  }

  double segment_integral(std::ptrdiff_t seg, double t0, double t1) const {
    static constexpr double kNode = 0.7745966692414833770358531;
    const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
    const auto s = static_cast<std::size_t>(seg);
    const double sum = 5.0 * eval_local(s, mid - half * kNode).f + 8.0 * eval_local(s, mid).f +
                       5.0 * eval_local(s, mid + half * kNode).f;
    return sum / 9.0 * half * h_;
  }

  double antiderivative(double x) const {
    const double turns = std::floor(x / period_);
    const double full = prefix_.back();
    std::size_t seg;
    double t;
    locate(x, seg, t);
    double partial = prefix_[seg];
    if (t > 0.0) partial += segment_integral(static_cast<std::ptrdiff_t>(seg), 0.0, t);
    return turns * full + partial;
  }

  std::vector<double> samples_;
  std::vector<double> coeffs_;
  std::vector<double> prefix_;
  double period_ = 0.0;
  double h_ = 0.0;
};

}  // namespace olb
