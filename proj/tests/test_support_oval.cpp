#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "olb/support_oval.hpp"

using namespace olb;

TEST(SupportOval, CircleEnvelopePoints) {
  const SupportOval c = SupportOval::circle(1.0);
  EXPECT_NEAR(c.point_at(0.0).x(), 1.0, 1e-15);
  EXPECT_NEAR(c.point_at(0.0).y(), 0.0, 1e-15);
  EXPECT_NEAR(c.point_at(kPi / 2).x(), 0.0, 1e-15);
  EXPECT_NEAR(c.point_at(kPi / 2).y(), 1.0, 1e-15);
}

TEST(SupportOval, EllipseEnvelopePointLiesOnCurve) {
  const SupportOval e = SupportOval::ellipse(2.0, 1.0);
  const PlanePoint v = e.point_at(0.0);
  EXPECT_NEAR(v.x(), 2.0, 1e-12);
  EXPECT_NEAR(v.y(), 0.0, 1e-12);
  for (double a = 0.05; a < kTwoPi; a += 0.37) {
    const PlanePoint q = e.point_at(a);
    EXPECT_NEAR(q.x() * q.x() / 4.0 + q.y() * q.y(), 1.0, 1e-11) << a;
    // The normal of x²/4 + y² = 1 at q is parallel to (x/4, y).
    EXPECT_NEAR(cross(PlanePoint(q.x() / 4.0, q.y()), unit_normal(a)), 0.0, 1e-11) << a;
  }
}

TEST(SupportOval, CurvatureRadius) {
  EXPECT_NEAR(SupportOval::circle(2.5).curvature_radius(1.1), 2.5, 1e-14);
  const double eps = 0.1;
  const SupportOval o = SupportOval::fourier(1.0, {0.0, eps}, {});
  EXPECT_NEAR(o.curvature_radius(0.0), 1.0 - 3.0 * eps, 1e-14);
  EXPECT_NEAR(o.curvature_radius(kPi / 4), 1.0, 1e-14);
  // Against numerical second derivatives.
  for (double a = 0.1; a < 6.0; a += 0.7) {
    const double h = 1e-3;
    const double d2 = (o.p(a + h) - 2 * o.p(a) + o.p(a - h)) / (h * h);
    EXPECT_NEAR(o.curvature_radius(a), o.p(a) + d2, 1e-6);
  }
}

TEST(SupportOval, ArcLength) {
  const SupportOval c = SupportOval::circle(1.0);
  EXPECT_NEAR(c.arc_length(0.0, kTwoPi), kTwoPi, 1e-13);
  EXPECT_NEAR(c.arc_length(0.0, kPi / 2), kPi / 2, 1e-13);
  const SupportOval o = SupportOval::fourier(1.0, {0.0, 0.1}, {});
  EXPECT_NEAR(o.arc_length(0.0, kPi), kPi, 1e-13);
  // Polyline length of the envelope.
  double poly = 0.0;
  const int k = 20000;
  for (int i = 0; i < k; ++i) poly += (o.point_at(0.3 + 1.9 * (i + 1) / k) - o.point_at(0.3 + 1.9 * i / k)).norm();
  EXPECT_NEAR(o.arc_length(0.3, 2.2), poly, 1e-7);
}

TEST(SupportOval, TangentAnglesFromPoint) {
  const SupportOval c = SupportOval::circle(1.0);
  const auto [a1, a2] = c.tangent_angles_from({std::sqrt(2.0), 0.0});
  EXPECT_NEAR(angle_diff(a1, -kPi / 4), 0.0, 1e-12);
  EXPECT_NEAR(angle_diff(a2, kPi / 4), 0.0, 1e-12);
  const auto [b1, b2] = c.tangent_angles_from({2.0, 0.0});
  EXPECT_NEAR(b2 - b1, 2 * kPi / 3, 1e-12);
  EXPECT_THROW(c.tangent_angles_from({0.5, 0.0}), ContainmentError);
  EXPECT_THROW(c.tangent_angles_from({1.0, 0.0}), ContainmentError);
}

TEST(SupportOval, TangentAnglesAgreeWithScan) {
  const SupportOval o = SupportOval::fourier(1.0, {0.0, 0.1, 0.02}, {0.0, 0.0, 0.03});
  for (const PlanePoint m : {PlanePoint(2.0, 0.3), PlanePoint(-1.1, 1.4), PlanePoint(0.2, -3.0)}) {
    const auto [a1, a2] = o.tangent_angles_from(m);
    const auto [b1, b2] = oracle::tangent_angles(o, m);
    EXPECT_NEAR(angle_diff(a1, b1), 0.0, 1e-10);
    EXPECT_NEAR(angle_diff(a2, b2), 0.0, 1e-10);
    EXPECT_GT(a2, a1);
    EXPECT_LT(a2 - a1, kPi);
  }
}

TEST(SupportOval, Validation) {
  const ValidationReport c = SupportOval::circle(1.0).validate();
  EXPECT_TRUE(c.passed);
  EXPECT_NEAR(c.min_curvature_radius, 1.0, 1e-14);
  EXPECT_FALSE(SupportOval::fourier(1.0, {0.0, 0.4}, {}).validate().passed);
  EXPECT_TRUE(SupportOval::fourier(1.0, {0.0, 0.1}, {}).validate().passed);
  EXPECT_THROW(SupportOval::fourier(1.0, {0.0, 0.4}, {}).require_valid(), ValidationError);
}

TEST(SupportOval, SampledBackendReproducesFourier) {
  const SupportOval f = SupportOval::fourier(1.0, {0.0, 0.05, 0.02}, {0.01});
  const SupportOval s = SupportOval::samples(f.sample(512));
  for (double a = 0.0; a < kTwoPi; a += 0.1) {
    EXPECT_NEAR(s.p(a), f.p(a), 1e-11);
    EXPECT_NEAR(s.dp(a), f.dp(a), 1e-9);
  }
  EXPECT_NEAR(s.perimeter(), f.perimeter(), 1e-12);
}

TEST(SupportOval, CentralSymmetryFlag) {
  EXPECT_TRUE(SupportOval::fourier(1.0, {0.0, 0.1}, {}).centrally_symmetric());
  EXPECT_FALSE(SupportOval::fourier(1.0, {0.0, 0.0, 0.05}, {}).centrally_symmetric());
  EXPECT_TRUE(SupportOval::ellipse(0.8, 0.6).centrally_symmetric());
}

TEST(SupportOval, EllipsePerimeter) {
  // Ramanujan's second approximation is accurate to ~1e-10 at this eccentricity.
  const double a = 0.8, b = 0.6;
  const double h = (a - b) * (a - b) / ((a + b) * (a + b));
  const double ram = kPi * (a + b) * (1 + 3 * h / (10 + std::sqrt(4 - 3 * h)));
  EXPECT_NEAR(SupportOval::ellipse(a, b).perimeter(), ram, 1e-9);
}
