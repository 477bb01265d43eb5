#include <cmath>

#include <gtest/gtest.h>

#include "olb/billiard_map.hpp"
#include "olb/periodic_orbits.hpp"
#include "olb/polygon.hpp"
#include "olb/table_forge.hpp"

using namespace olb;

namespace {

FourPeriodicSpec sin2x(double eps) { return FourPeriodicSpec::from_harmonics({{2, eps, 0.0}}); }

/// Largest |p − q| over a grid after the best rotation of q by a multiple of π/4.
double aligned_support_distance(const SupportOval& p, const SupportOval& q) {
  double best = INFINITY;
  for (int k = 0; k < 8; ++k) {
    double d = 0.0;
    for (int i = 0; i < 720; ++i) {
      const double a = kTwoPi * i / 720;
      d = std::max(d, std::abs(p.p(a) - q.p(a + k * kPi / 4)));
    }
    best = std::min(best, d);
  }
  return best;
}

}  // namespace

TEST(TableForge, ZeroSpecGivesHalfCircle) {
  const ForgedTable t = from_f(FourPeriodicSpec::zero());
  for (double a = 0.0; a < kTwoPi; a += 0.3) EXPECT_NEAR(t.oval.p(a), 0.5, 1e-14);
  const ParallelogramState s = parallelogram_orbit(FourPeriodicSpec::zero(), 0.7);
  EXPECT_NEAR(s.alpha1, 0.7 - kPi / 4, 1e-15);
  EXPECT_NEAR(s.omega(), kPi / 2, 1e-15);
  EXPECT_NEAR(s.perimeter(), 4.0, 1e-14);
}

TEST(TableForge, FamilyHasPerimeterFour) {
  const FourPeriodicSpec spec = sin2x(0.2);
  for (double x = 0.0; x < kTwoPi; x += 0.4) EXPECT_NEAR(parallelogram_orbit(spec, x).perimeter(), 4.0, 1e-13);
}

TEST(TableForge, QuarterTurnShiftsSides) {
  const FourPeriodicSpec spec = FourPeriodicSpec::from_harmonics({{2, 0.15, 0.05}, {6, 0.01, 0.0}});
  for (double x : {0.1, 0.9, 2.2}) {
    const ParallelogramState a = parallelogram_orbit(spec, x);
    const ParallelogramState b = parallelogram_orbit(spec, x + kPi / 2);
    EXPECT_NEAR(b.alpha1, a.alpha2, 1e-13);
    EXPECT_NEAR(b.alpha2, a.alpha1 + kPi, 1e-13);
    EXPECT_NEAR(b.p1, a.p2, 1e-13);
    EXPECT_NEAR(b.p2, a.p1, 1e-13);
  }
}

TEST(TableForge, ContactCoordinates) {
  EXPECT_NEAR(contact_coordinates(parallelogram_orbit(FourPeriodicSpec::zero(), 0.3)).y, 0.0, 1e-15);
  const double t = 0.8;
  const FourPeriodicSpec spec = FourPeriodicSpec::ellipse(t);
  for (double x : {0.0, 0.4, 1.3}) {
    const ParallelogramState s = parallelogram_orbit(spec, x);
    const ContactPoint c = contact_coordinates(s);
    EXPECT_NEAR(c.x, x, 1e-14);
    EXPECT_NEAR(c.y, 2 * std::cos(2 * t) * std::cos(2 * x), 1e-14);
    EXPECT_NEAR(c.z, std::cos(2 * t) * std::sin(2 * x), 1e-14);
    const ParallelogramState back = from_contact(c);
    EXPECT_NEAR(back.alpha1, s.alpha1, 1e-13);
    EXPECT_NEAR(back.p2, s.p2, 1e-13);
  }
}

TEST(TableForge, ForgedTableCarriesTheFamily) {
  const ForgedTable t = from_f(sin2x(0.1));
  EXPECT_TRUE(t.fourier);
  EXPECT_TRUE(t.oval.validate().passed);
  EXPECT_TRUE(t.oval.centrally_symmetric());
  for (double x = 0.0; x < kPi; x += 0.25) {
    const ParallelogramState s = parallelogram_orbit(sin2x(0.1), x);
    for (const auto& [a, p] : parallelogram_sides(s)) EXPECT_NEAR(t.oval.p(a), p, 1e-10);
    const Orbit o = orbit(t.oval, {s.alpha1, s.alpha2}, 4);
    EXPECT_LT(std::abs(o.states.back().alpha1 - s.alpha1 - kTwoPi), 1e-8);
  }
}

TEST(TableForge, EllipseSpecGivesEllipse) {
  // The table of cos 2t sin 2x is an ellipse with a + b = 1 (axes sin²t, cos²t).
  for (double t : {0.6, 0.8, 1.0}) {
    const ForgedTable f = from_f(FourPeriodicSpec::ellipse(t));
    const double a = std::pow(std::sin(t), 2), b = std::pow(std::cos(t), 2);
    EXPECT_LT(aligned_support_distance(f.oval, SupportOval::ellipse(a, b)), 1e-8) << t;
  }
}

TEST(TableForge, ConstructionErrors) {
  try {
    from_f(sin2x(1.1));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_EQ(e.kind(), ConstructionError::Kind::kFPrimeBound);
    EXPECT_NE(std::string(e.what()).find("f-prime bound violated"), std::string::npos);
  }
  try {
    from_f(FourPeriodicSpec::from_harmonics({{4, 0.01, 0.0}}));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_EQ(e.kind(), ConstructionError::Kind::kAntisymmetry);
  }
  try {
    from_f(FourPeriodicSpec::from_harmonics({{2, 0.0, 0.05}}));
    FAIL();
  } catch (const ConstructionError& e) {
    EXPECT_EQ(e.kind(), ConstructionError::Kind::kNormalization);
  }
}

TEST(TableForge, CallableSpecMatchesHarmonics) {
  const FourPeriodicSpec h = sin2x(0.08);
  const FourPeriodicSpec c = FourPeriodicSpec::from_callable([](double x) {
    return std::array<double, 3>{0.08 * std::sin(2 * x), 0.16 * std::cos(2 * x), -0.32 * std::sin(2 * x)};
  });
  const SupportOval a = from_f(h).oval, b = from_f(c).oval;
  for (double x = 0.0; x < kTwoPi; x += 0.2) EXPECT_NEAR(a.p(x), b.p(x), 1e-11);
}

TEST(TableForge, RadonCircleSeed) {
  const SupportOval o = radon_like(std::vector<double>(33, 0.5));
  for (double a = 0.0; a < kTwoPi; a += 0.1) {
    EXPECT_NEAR(o.p(a), 0.5, 1e-14);
    EXPECT_NEAR(o.dp(a), 0.0, 1e-13);
  }
}

TEST(TableForge, RadonEllipseSeed) {
  const double a = 0.58, b = 0.42;
  const SupportOval e = SupportOval::ellipse(a, b);
  const SupportOval o = radon_like(sample_arc([&](double x) { return e.p(x); }, 256));
  for (double x = 0.0; x < kTwoPi; x += 0.05) EXPECT_NEAR(o.p(x), e.p(x), 1e-8) << x;
}

TEST(TableForge, RadonParallelogramsHavePerimeterFour) {
  auto seed = [](double x) { return 0.5 + 0.02 * (std::cos(4 * x) - 1.0) * std::cos(2 * x); };
  const SupportOval o = radon_like(sample_arc(seed, 128));
  EXPECT_TRUE(o.validate().passed);
  for (double a = 0.05; a < kPi / 2; a += 0.2) {
    // The tangent line at angle a is paired with the one at β(a) = a + arccos(−p′(a)).
    const double w = std::acos(-o.dp(a));
    EXPECT_NEAR(4 * (o.p(a) + o.p(a + w)) / std::sin(w), 4.0, 1e-9);
    EXPECT_NEAR(o.p(a + kPi), o.p(a), 1e-12);
  }
}

TEST(TableForge, RadonErrors) {
  using Kind = ConstructionError::Kind;
  auto kind_of = [](const std::vector<double>& arc) {
    try {
      radon_like(arc);
    } catch (const ConstructionError& e) {
      return e.kind();
    }
    return Kind::kSeamDiscontinuity;
  };
  EXPECT_EQ(kind_of(std::vector<double>(33, 0.6)), Kind::kNormalization);
  EXPECT_EQ(kind_of(sample_arc([](double x) { return 0.5 + 0.01 * std::sin(2 * x); }, 32)), Kind::kArcConstraint);
  EXPECT_EQ(kind_of(std::vector<double>(5, 0.5)), Kind::kArcConstraint);
}

TEST(TableForge, ParallelogramFieldsMatchPolygonFormulas) {
  for (double w : {0.5, kPi / 3, kPi / 2, 2.2}) {
    const double a1 = 0.4, a2 = a1 + w;
    const double p1 = 0.3, p2 = std::sin(w) - p1;
    const PolygonConfig poly = parallelogram_polygon(a1, a2, p1, p2);
    const ParallelogramFields f = parallelogram_fields(a1, a2);
    EXPECT_NEAR(phi(poly, 0), f.xi1(2), 1e-11);
    EXPECT_NEAR(phi(poly, 1), f.xi2(3), 1e-11);
    EXPECT_NEAR(std::abs(f.bracket(3)), std::sin(w), 1e-15);
    // λ annihilates both fields and not their bracket.
    EXPECT_NEAR(f.lambda.dot(f.xi1), 0.0, 1e-15);
    EXPECT_NEAR(f.lambda.dot(f.xi2), 0.0, 1e-15);
    EXPECT_GT(std::abs(f.lambda.dot(f.bracket)), 0.0);
    // Perimeter 4(p₁ + p₂)/sin ω is constant along both fields on its level set.
    const double s = std::sin(w), c = std::cos(w);
    const Eigen::Vector4d grad(4 * (p1 + p2) * c / (s * s), -4 * (p1 + p2) * c / (s * s), 4 / s, 4 / s);
    EXPECT_NEAR(grad.dot(f.xi1), 0.0, 1e-12);
    EXPECT_NEAR(grad.dot(f.xi2), 0.0, 1e-12);
    for (int k = 0; k < 4; ++k) EXPECT_NEAR(grad(k) * s / 4, f.dF(k), 1e-12);
  }
  EXPECT_NEAR(parallelogram_fields(0.0, kPi / 3).bracket.norm(), std::sqrt(2.0) * std::sin(kPi / 3), 1e-15);
}
