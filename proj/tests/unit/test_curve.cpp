#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "deltaloop/curve.hpp"
#include "deltaloop/errors.hpp"
#include "oracle_values.hpp"

using namespace deltaloop;

namespace {

const ArcCurve& circle() {
  static const ArcCurve c = build_curve(CurveSpec::circle(1.0));
  return c;
}

const ArcCurve& ellipse() {
  static const ArcCurve c = build_curve(CurveSpec::ellipse(2.0, 1.0));
  return c;
}

}  // namespace

TEST(Curve, CircleLengthAndConstantCurvature) {
  EXPECT_NEAR(circle().length(), 2.0 * std::numbers::pi, 1e-12);
  for (double s : {0.0, 0.7, 2.0, 5.5}) {
    const auto c = circle().curvature(s);
    EXPECT_NEAR(c.gamma, 1.0, 1e-10);
    EXPECT_NEAR(c.dgamma, 0.0, 1e-8);
    EXPECT_NEAR(c.ddgamma, 0.0, 1e-6);
  }
}

TEST(Curve, ScaledCircleCurvatureIsInverseRadius) {
  const auto c = build_curve(CurveSpec::circle(2.5));
  EXPECT_NEAR(c.length(), 5.0 * std::numbers::pi, 1e-11);
  EXPECT_NEAR(c.gamma(1.0), 0.4, 1e-10);
}

TEST(Curve, TotalTurningIsTwoPi) {
  EXPECT_NEAR(circle().total_turning(), 2.0 * std::numbers::pi, 1e-10);
  EXPECT_NEAR(ellipse().total_turning(), 2.0 * std::numbers::pi, 1e-10);
}

TEST(Curve, EllipseOracleValues) {
  const auto& e = ellipse();
  EXPECT_NEAR(e.length(), oracle::ellipse_length, 1e-12);

  const auto v = e.curvature(0.0);
  EXPECT_NEAR(v.gamma, oracle::ellipse_vertex_gamma, 1e-10);
  EXPECT_NEAR(v.dgamma, 0.0, 1e-8);
  EXPECT_NEAR(v.ddgamma, oracle::ellipse_vertex_ddgamma, 1e-6);

  const auto q = e.curvature(oracle::ellipse_pi2_s);
  EXPECT_NEAR(q.gamma, oracle::ellipse_pi2_gamma, 1e-10);
  EXPECT_NEAR(q.ddgamma, oracle::ellipse_pi2_ddgamma, 1e-7);

  const auto p = e.curvature(oracle::ellipse_pi3_s);
  EXPECT_NEAR(p.gamma, oracle::ellipse_pi3_gamma, 1e-10);
  EXPECT_NEAR(std::abs(p.dgamma), oracle::ellipse_pi3_abs_dgamma, 1e-8);
  EXPECT_NEAR(p.ddgamma, oracle::ellipse_pi3_ddgamma, 1e-6);
}

TEST(Curve, EllipseSupremaAtTheVertex) {
  EXPECT_NEAR(ellipse().gamma_sup(), 2.0, 1e-9);
  EXPECT_NEAR(ellipse().ddgamma_sup(), 18.0, 1e-5);
}

TEST(Curve, EvaluatorsArePeriodic) {
  const auto& e = ellipse();
  const double L = e.length();
  EXPECT_NEAR(e.gamma(0.3), e.gamma(0.3 + L), 1e-12);
  EXPECT_NEAR(e.gamma(0.3), e.gamma(0.3 - 2.0 * L), 1e-12);
  const auto a = e.position(1.1), b = e.position(1.1 + L);
  EXPECT_NEAR(a.x, b.x, 1e-12);
  EXPECT_NEAR(a.y, b.y, 1e-12);
}

TEST(Curve, ArcLengthParametrizationHasUnitSpeed) {
  for (double s = 0.0; s < ellipse().length(); s += 0.37) EXPECT_NEAR(norm(ellipse().tangent(s)), 1.0, 1e-12);
}

TEST(Curve, CurvatureMatchesFrameDefinition) {
  // gamma = Gamma1'' Gamma2' - Gamma2'' Gamma1'.
  for (double s : {0.2, 1.3, 4.0}) {
    const auto f = ellipse().frame(s);
    EXPECT_NEAR(f.gamma, f.acceleration.x * f.tangent.y - f.acceleration.y * f.tangent.x, 1e-10);
  }
}

TEST(Curve, JacobianIsOnePlusUGamma) {
  for (double s : {0.0, 0.9, 2.4}) {
    for (double u : {-0.2, -0.05, 0.0, 0.1, 0.24}) {
      EXPECT_NEAR(tubular_jacobian(ellipse(), s, u), 1.0 + u * ellipse().gamma(s), 1e-9);
    }
  }
}

TEST(Curve, PositiveOffsetPointsOutward) {
  // The circle is centred at the origin; u > 0 must increase the radius.
  const Vec2 p = tubular_map(circle(), 1.0, 0.2);
  EXPECT_NEAR(norm(p), 1.2, 1e-12);
}

TEST(Curve, JacobianAtLeastHalfOnTheCertifiedRegion) {
  for (const ArcCurve* c : {&circle(), &ellipse()}) {
    const double umax = 1.0 / (2.0 * c->gamma_sup());
    for (double s = 0.0; s < c->length(); s += c->length() / 200.0)
      for (double u : {-umax * 0.999, 0.0, umax * 0.999}) EXPECT_GE(tubular_jacobian(*c, s, u), 0.5 - 1e-12);
  }
}

TEST(Curve, CircleChordGap) {
  const auto g = chord_gap(circle(), 0.4, 2000);
  EXPECT_NEAR(g.tau, oracle::circle_chord_p04, 1e-10);
}

TEST(Curve, TubularRadiusIsConsistent) {
  for (const ArcCurve* c : {&circle(), &ellipse()}) {
    const auto r = certify_tubular_radius(*c, 2000);
    EXPECT_GT(r.a1, 0.0);
    EXPECT_LE(r.a1, r.a0);
    EXPECT_LE(r.a1, r.tau / 4.0 + 1e-15);
    EXPECT_LT(r.a0 * c->gamma_sup(), 0.5 + 1e-12);
    EXPECT_EQ(r.certificate.collisions, 0u);
  }
}

TEST(Curve, CollisionScanDetectsOverlapBeyondFocalDistance) {
  // At half-width 1.2 the inner offsets of a unit circle cross the centre.
  const auto r = collision_scan(circle(), 1.2, 200, 10);
  EXPECT_GT(r.collisions, 0u);
}

TEST(Curve, CurvatureProfileSamplesUniformly) {
  const auto p = curvature_profile(ellipse(), 100);
  ASSERT_EQ(p.size(), 100u);
  EXPECT_DOUBLE_EQ(p.front().s, 0.0);
  EXPECT_NEAR(p[1].s, ellipse().length() / 100.0, 1e-14);
}

TEST(Curve, FourierLoopReproducesEllipse) {
  FourierCoefficients f;
  f.x_cos = {0.0, 2.0};
  f.x_sin = {0.0, 0.0};
  f.y_cos = {0.0, 0.0};
  f.y_sin = {0.0, 1.0};
  const auto c = build_curve(CurveSpec::fourier_loop(f));
  EXPECT_NEAR(c.length(), oracle::ellipse_length, 1e-10);
  EXPECT_NEAR(c.gamma_sup(), 2.0, 1e-8);
}

TEST(Curve, InvalidSpecsAreRejected) {
  EXPECT_THROW(build_curve(CurveSpec::circle(-1.0)), PreconditionError);
  EXPECT_THROW(build_curve(CurveSpec::ellipse(1.0, 0.0)), PreconditionError);
  FourierCoefficients figure_eight;
  figure_eight.x_cos = {0.0, 0.0};
  figure_eight.x_sin = {0.0, 1.0};
  figure_eight.y_cos = {0.0, 0.0, 0.0};
  figure_eight.y_sin = {0.0, 0.0, 1.0};
  EXPECT_THROW(build_curve(CurveSpec::fourier_loop(figure_eight)), PreconditionError);
}

TEST(Curve, TubularMapRejectsOffsetsBeyondHalfFocalDistance) {
  EXPECT_THROW(tubular_map(circle(), 0.0, 0.6), DomainError);
}
