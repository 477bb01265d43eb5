#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "olb/billiard_map.hpp"

using namespace olb;

namespace {
const SupportOval kCircle = SupportOval::circle(1.0);
}

TEST(BilliardMap, CircleRotates) {
  LinePairState s = step(kCircle, {0.0, kPi / 2});
  EXPECT_NEAR(s.alpha1, kPi / 2, 1e-15);
  EXPECT_NEAR(s.alpha2, kPi, 1e-12);
  s = step(kCircle, {0.0, 2 * kPi / 3});
  EXPECT_NEAR(s.alpha2, 4 * kPi / 3, 1e-12);
  EXPECT_NEAR(radii(kCircle, s).first - radii(kCircle, {0.0, 2 * kPi / 3}).second, 0.0, 1e-12);
}

TEST(BilliardMap, CircleCartesian) {
  const PlanePoint m2 = cartesian_step(kCircle, {std::sqrt(2.0), 0.0});
  EXPECT_NEAR(m2.x(), 0.0, 1e-12);
  EXPECT_NEAR(m2.y(), std::sqrt(2.0), 1e-12);
  const PlanePoint q = cartesian_step(kCircle, {2.0, 0.0});
  EXPECT_NEAR(q.x(), 2.0 * std::cos(2 * kPi / 3), 1e-12);
  EXPECT_NEAR(q.y(), 2.0 * std::sin(2 * kPi / 3), 1e-12);
}

TEST(BilliardMap, AgreesWithIndependentConstruction) {
  for (const SupportOval& o : {SupportOval::ellipse(0.8, 0.6), SupportOval::fourier(1.0, {0.0, 0.0, 0.05}, {0.0, 0.02})}) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> ua(0, kTwoPi), uw(0.3, 2.8);
    for (int k = 0; k < 40; ++k) {
      const double a = ua(rng);
      const PlanePoint m = vertex(o, {a, a + uw(rng)});
      const auto ref = oracle::next_vertex(o, m);
      ASSERT_TRUE(ref.has_value());
      const PlanePoint got = vertex(o, step(o, state_from_point(o, m)));
      EXPECT_LT((got - *ref).norm(), 1e-8);
      EXPECT_LT((cartesian_step(o, m) - *ref).norm(), 1e-8);
    }
  }
}

TEST(BilliardMap, CircleJacobian) {
  const Eigen::Matrix2d j = jacobian(kCircle, {0.0, kPi / 2});
  EXPECT_NEAR(j.determinant(), 1.0, 1e-14);
  EXPECT_NEAR(j(1, 0), 0.5, 1e-14);
  EXPECT_LT(symplectic_defect(kCircle, {0.4, 1.9}), 1e-10);
}

TEST(BilliardMap, JacobianMatchesFiniteDifferences) {
  const SupportOval o = SupportOval::fourier(1.0, {0.0, 0.06, 0.02}, {0.0, 0.0, 0.03});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ua(0, kTwoPi), uw(0.2, 2.9);
  for (int k = 0; k < 200; ++k) {
    const double a = ua(rng);
    const LinePairState s{a, a + uw(rng)};
    const Eigen::Matrix2d exact = jacobian(o, s), fd = jacobian_fd(o, s);
    EXPECT_LT((exact - fd).cwiseAbs().maxCoeff() / std::max(1.0, exact.cwiseAbs().maxCoeff()), 1e-6);
    EXPECT_LT(symplectic_defect(o, s), 1e-6);
  }
}

TEST(BilliardMap, TwistPositive) {
  for (const SupportOval& o : {kCircle, SupportOval::ellipse(0.8, 0.6), SupportOval::fourier(1.0, {0.0, 0.0, 0.05}, {})}) {
    const TwistReport r = twist_report(o, 500, 4);
    EXPECT_TRUE(r.passed());
    EXPECT_GT(r.min_twist_T, 0.0);
    EXPECT_GT(r.min_twist_T2, 0.0);
    EXPECT_LT(r.max_det_defect, 1e-12);
  }
}

TEST(BilliardMap, PhaseRoundTrip) {
  const SupportOval o = SupportOval::ellipse(1.0, 0.7);
  const LinePairState s{0.7, 2.1};
  const LinePairState back = from_phase(o, to_phase(o, s));
  EXPECT_NEAR(back.alpha2, s.alpha2, 1e-12);
  EXPECT_THROW(from_phase(o, {0.0, -1.0}), DomainError);
}

TEST(BilliardMap, CircleInvariantLoopAction) {
  // The circles R = const are invariant; the loop integral is preserved.
  for (double w : {0.7, kPi / 2, 2.4}) {
    std::vector<PhasePoint> loop, image;
    for (int k = 0; k < 256; ++k) {
      const double a = kTwoPi * k / 256;
      loop.push_back(to_phase(kCircle, {a, a + w}));
      image.push_back(phase_map(kCircle, loop.back()));
    }
    EXPECT_NEAR(loop_action(loop), loop_action(image), 1e-8);
    EXPECT_NEAR(loop_action(loop), kTwoPi * std::pow(std::tan(w / 2), 2), 1e-10);
  }
}

TEST(BilliardMap, LoopActionInvariantOnPerturbedTable) {
  // A small closed loop in phase space and its image enclose the same area.
  const SupportOval o = SupportOval::fourier(1.0, {0.0, 0.0, 0.05}, {0.0, 0.03});
  const PhasePoint c = to_phase(o, {0.5, 2.0});
  std::vector<PhasePoint> loop, image;
  for (int k = 0; k < 400; ++k) {
    const double t = kTwoPi * k / 400;
    loop.push_back({c.alpha + 0.05 * std::cos(t), c.R * (1.0 + 0.05 * std::sin(t))});
    image.push_back(phase_map(o, loop.back()));
  }
  EXPECT_NEAR(loop_action(loop), loop_action(image), 1e-8);
}

TEST(BilliardMap, OrbitClosure) {
  Orbit o = orbit(kCircle, {0.0, kPi / 2}, 4);
  EXPECT_LT(closure_defect(o.states.front(), o.states.back()), 1e-12);
  o = orbit(kCircle, {0.0, 2 * kPi / 5}, 5);
  EXPECT_LT(closure_defect(o.states.front(), o.states.back()), 1e-12);
  o = orbit(kCircle, {0.0, kPi / 2}, 8);
  EXPECT_LT((o.vertices[0] - o.vertices[4]).norm(), 1e-12);
  EXPECT_NEAR(rotation_number(kCircle, {0.0, 0.5}, 20), 0.5 / kTwoPi, 1e-12);
}

TEST(BilliardMap, CommutesWithCentralSymmetry) {
  const SupportOval o = SupportOval::ellipse(0.9, 0.5);
  const LinePairState s{0.3, 1.9};
  const LinePairState a = step(o, s);
  const LinePairState b = step(o, {s.alpha1 + kPi, s.alpha2 + kPi});
  EXPECT_NEAR(b.alpha2 - kPi, a.alpha2, 1e-12);
}

TEST(BilliardMap, OrbitRejectsDegenerateStart) {
  EXPECT_THROW(orbit(kCircle, {0.0, 0.0}, 3), DomainError);
  EXPECT_THROW(orbit(kCircle, {0.0, 3.5}, 3), DomainError);
}
