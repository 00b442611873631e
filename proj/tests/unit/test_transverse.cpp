#include <gtest/gtest.h>

#include <cmath>

#include "deltaloop/errors.hpp"
#include "deltaloop/transverse.hpp"
#include "oracle_values.hpp"

using namespace deltaloop;

TEST(Transverse, PlusOracleValues) {
  const auto r = solve_zeta_plus(1.0, 10.0);
  EXPECT_NEAR(r.zeta, oracle::zeta_plus_a1_b10, 1e-12);
  EXPECT_NEAR(r.deviation, oracle::deviation_plus_a1_b10, 1e-17);
  EXPECT_TRUE(r.certified);
  EXPECT_LE(std::abs(r.residual), 1e-12);
  EXPECT_NEAR(solve_zeta_plus(2.0, 10.0).zeta, oracle::zeta_plus_a2_b10, 1e-12);
  EXPECT_NEAR(solve_zeta_plus(2.0, 10.0).deviation, oracle::deviation_plus_a2_b10, 1e-20);
}

TEST(Transverse, MinusOracleValues) {
  const auto r = solve_zeta_minus(1.0, 10.0, 1.0);
  EXPECT_NEAR(r.zeta, oracle::zeta_minus_a1_b10_g1, 1e-12);
  EXPECT_NEAR(r.deviation, oracle::deviation_minus_a1_b10_g1, 1e-17);
  EXPECT_TRUE(r.certified);
  EXPECT_NEAR(solve_zeta_minus(1.0, 10.0, 0.0).zeta, oracle::zeta_minus_a1_b10_g0, 1e-12);
  const auto w = solve_zeta_minus(0.5, 40.0, 2.0);
  EXPECT_NEAR(w.zeta, oracle::zeta_minus_a05_b40_g2, 1e-10);
  EXPECT_NEAR(w.deviation, oracle::deviation_minus_a05_b40_g2, 1e-19);
}

TEST(Transverse, SecularFunctionValue) {
  EXPECT_NEAR(secular_g_plus(1.0, 10.0, 4.9), oracle::g_plus_a1_b10_k49, 1e-12);
  EXPECT_NEAR(secular_g_plus_deviation(1.0, 10.0, 0.1), oracle::g_plus_a1_b10_k49, 1e-12);
}

TEST(Transverse, AnalyticBounds) {
  const auto p = zeta_plus_bounds(1.0, 10.0);
  EXPECT_DOUBLE_EQ(p.lower, -25.0);
  EXPECT_NEAR(p.upper, oracle::zeta_plus_upper_a1_b10, 1e-12);
  const auto m = zeta_minus_bounds(1.0, 10.0);
  EXPECT_NEAR(m.lower, oracle::zeta_minus_lower_a1_b10, 1e-11);
  EXPECT_DOUBLE_EQ(m.upper, -25.0);
  const auto w = zeta_plus_bounds(2.0, 10.0);
  EXPECT_NEAR(w.upper - w.lower, oracle::zeta_plus_width_a2_b10, 1e-15);
}

TEST(Transverse, StrictSolversCheckHypotheses) {
  try {
    solve_zeta_plus(0.2, 10.0);
    FAIL() << "expected PreconditionError";
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("beta*a <= 8/3"), std::string::npos);
  }
  EXPECT_THROW(solve_zeta_minus(0.5, 10.0, 0.0), PreconditionError);   // beta a = 5
  EXPECT_THROW(solve_zeta_minus(1.0, 10.0, 4.0), PreconditionError);   // beta <= 8/3 gamma
}

TEST(Transverse, GroundStateWithoutBoundHypotheses) {
  const auto r = transverse_ground_state({0.25, 10.0, 0.0, Sign::plus});  // beta a = 2.5
  EXPECT_FALSE(r.hypotheses);
  EXPECT_FALSE(r.certified);
  EXPECT_EQ(r.violated, "beta*a <= 8/3");
  EXPECT_LT(r.zeta, 0.0);
  EXPECT_GT(r.zeta, -25.0);
  EXPECT_THROW(transverse_ground_state({0.2, 10.0, 0.0, Sign::plus}), PreconditionError);  // beta a = 2

  const auto m = transverse_ground_state({1.0, 10.0, 1.0, Sign::minus});
  EXPECT_NEAR(m.zeta, oracle::zeta_minus_a1_b10_g1, 1e-12);
}

TEST(Transverse, MinusGroundStateForLargeRobinCoefficient) {
  // a gamma_+ > 1: T- has a second, odd negative eigenvalue; the even root stays lowest.
  const TransverseProblem p{1.0, 10.0, 3.0, Sign::minus};
  const auto r = transverse_ground_state(p);
  EXPECT_GT(r.k, 3.0);
  const auto fd = fd_transverse_oracle(p, 4000, 2);
  EXPECT_NEAR(fd.values[0], r.zeta, 1e-3);
  EXPECT_LT(fd.values[1], 0.0);
}

TEST(Transverse, MinusBelowPlus) {
  for (double a : {0.3, 0.6, 1.0}) {
    for (double beta : {10.0, 30.0}) {
      const auto p = transverse_ground_state({a, beta, 0.0, Sign::plus});
      const auto m = transverse_ground_state({a, beta, 0.8, Sign::minus});
      EXPECT_LT(m.zeta, p.zeta);
    }
  }
}

TEST(Transverse, ZetaDecreasesWithGammaForMinus) {
  // Larger Robin coefficient lowers the ground state.
  const double z0 = transverse_ground_state({1.0, 10.0, 0.0, Sign::minus}).zeta;
  const double z1 = transverse_ground_state({1.0, 10.0, 1.0, Sign::minus}).zeta;
  EXPECT_LT(z1, z0);
}

TEST(Transverse, FiniteDifferencesConvergeAtSecondOrder) {
  for (Sign s : {Sign::plus, Sign::minus}) {
    const TransverseProblem p{1.0, 10.0, 1.0, s};
    const double exact = transverse_ground_state(p).zeta;
    double prev = 0.0;
    for (std::size_t n : {500, 1000, 2000, 4000}) {
      const double err = std::abs(fd_transverse_oracle(p, n, 1).values[0] - exact);
      if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 1.8);
      prev = err;
    }
  }
}

TEST(Transverse, SingleNegativeEigenvalue) {
  EXPECT_TRUE(verify_single_negative({1.0, 10.0, 0.8, Sign::minus}));
  EXPECT_FALSE(verify_single_negative({1.0, 10.0, 1.2, Sign::minus}));  // odd mode below zero
  EXPECT_TRUE(verify_single_negative({1.0, 10.0, 0.0, Sign::plus}));
  EXPECT_THROW(verify_single_negative({0.5, 10.0, 0.0, Sign::minus}), PreconditionError);
}

TEST(Transverse, GroundStateShape) {
  const TransverseProblem p{1.0, 10.0, 1.0, Sign::minus};
  const auto f = fd_ground_state(p, 400);
  const auto u = fd_transverse_nodes(p, 400);
  ASSERT_EQ(f.size(), u.size());
  EXPECT_GT(f[200], 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_LE(f[i], f[200] + 1e-14);
}

TEST(Transverse, PositiveFloorScanIsClear) {
  const auto g = positive_floor_minus(1.0, 10.0, 0.5);
  EXPECT_TRUE(g.clear());
  EXPECT_DOUBLE_EQ(g.floor, std::min({M_PI * M_PI / 16.0, 2.5, 100.0}));
  EXPECT_THROW(positive_floor_minus(1.0, 10.0, 1.0), PreconditionError);
}

TEST(Transverse, ProblemValidation) {
  EXPECT_THROW(transverse_ground_state({-1.0, 10.0, 0.0, Sign::plus}), PreconditionError);
  EXPECT_THROW(transverse_ground_state({1.0, -10.0, 0.0, Sign::plus}), PreconditionError);
}
