#include <cmath>

#include <gtest/gtest.h>

#include "aremor/dense_kernels.hpp"
#include "aremor/errors.hpp"
#include "aremor/lqr_metrics.hpp"
#include "aremor/system_reduction.hpp"
#include "oracles.hpp"

namespace aremor {
namespace {

StateSpaceSystem scalar_system() {
  return make_system(Matrix::Constant(1, 1, -1.0), Matrix::Ones(1, 1),
                     Matrix::Ones(1, 1));
}

StateSpaceSystem heat_system() {
  PdeConfig cfg;
  cfg.dx = 0.05;
  return assemble_system(cfg);
}

StateSpaceSystem random_system(oracle::Rng& rng, Index n, Index m, Index p) {
  return make_system(rng.stable(n), rng.gaussian(n, m), rng.gaussian(p, n));
}

TEST(RelativeResidual, ExactSolutionOnFullSpace) {
  oracle::Rng rng(131);
  const StateSpaceSystem sys = random_system(rng, 8, 2, 2);
  const Matrix P = solve_dense_are(sys.dense_A(), sys.B, sys.C, sys.R);
  EXPECT_LE(relative_residual(sys, Matrix::Identity(8, 8), P), 1e-12);
}

TEST(RelativeResidual, ZeroSurrogateNormalizesToOne) {
  oracle::Rng rng(132);
  const StateSpaceSystem sys = random_system(rng, 6, 1, 1);
  EXPECT_NEAR(relative_residual(sys, Matrix::Identity(6, 2), Matrix::Zero(2, 2)),
              1.0, 1e-14);
}

TEST(RelativeResidual, MatchesExplicitAssembly) {
  oracle::Rng rng(133);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = rng.integer(4, 40);
    const StateSpaceSystem sys = random_system(rng, n, rng.integer(1, 2), rng.integer(1, 3));
    const Index k = rng.integer(1, static_cast<int>(n));
    const Matrix W = rng.orthogonal(n).leftCols(k);
    const Matrix P_r = rng.symmetric(k);
    const Matrix X = W * P_r * W.transpose();
    const double expected =
        oracle::explicit_are_residual(sys.dense_A(), sys.B, sys.C, sys.R, X).norm() /
        sys.C.squaredNorm();
    EXPECT_LE(std::abs(relative_residual(sys, W, P_r) - expected), 1e-10 * expected);
  }
}

TEST(RelativeResidual, DimensionMismatchIsRejected) {
  oracle::Rng rng(134);
  const StateSpaceSystem sys = random_system(rng, 5, 1, 1);
  EXPECT_THROW(relative_residual(sys, Matrix::Identity(5, 2), Matrix::Identity(3, 3)),
               InvalidArgument);
}

TEST(LiftGain, FullSpaceAndScalar) {
  oracle::Rng rng(141);
  const StateSpaceSystem sys = random_system(rng, 6, 2, 2);
  const Matrix P = solve_dense_are(sys.dense_A(), sys.B, sys.C, sys.R);
  const ReducedModel full = reduce(sys, Matrix::Identity(6, 6), Matrix::Identity(6, 6));
  EXPECT_LE((lift_gain(full, P, sys.R) - sys.B.transpose() * P).norm(), 1e-14 * P.norm());

  const StateSpaceSystem s = scalar_system();
  const ReducedModel red = reduce(s, Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  const Matrix p = solve_dense_are(red.A_r, red.B_r, red.C_r, s.R);
  EXPECT_NEAR(lift_gain(red, p, s.R)(0, 0), std::sqrt(2.0) - 1.0, 1e-14);
}

TEST(GainError, TrivialCases) {
  oracle::Rng rng(142);
  const Matrix K = rng.gaussian(2, 9);
  EXPECT_EQ(gain_error(K, K), 0.0);
  EXPECT_NEAR(gain_error(2.0 * K, K), 1.0, 1e-15);
  EXPECT_THROW(gain_error(K, Matrix::Zero(2, 9)), InvalidArgument);
}

TEST(H2Norm, ScalarAndZeroOutput) {
  const StateSpaceSystem sys = scalar_system();
  EXPECT_NEAR(h2_norm(sys), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(h2_norm(sys.dense_A(), sys.B, Matrix::Zero(1, 1)), 0.0);
}

TEST(H2Norm, MatchesFrequencyQuadrature) {
  oracle::Rng rng(151);
  for (int trial = 0; trial < 5; ++trial) {
    const StateSpaceSystem sys = random_system(rng, 6, 2, 2);
    const double quad = oracle::h2_norm_quadrature(sys.dense_A(), sys.B, sys.C);
    EXPECT_LE(std::abs(h2_norm(sys) - quad), 1e-3 * quad);
  }
}

TEST(H2Norm, HeatSystemMatchesQuadratureToOnePercent) {
  const StateSpaceSystem sys = heat_system();
  const double quad =
      oracle::h2_norm_modal_quadrature(sys.dense_A(), sys.B, sys.C, 1e-3, 1e6, 10000);
  EXPECT_LE(std::abs(h2_norm(sys) - quad), 1e-2 * quad);
}

TEST(H2Norm, InvariantUnderOrthogonalChangeOfState) {
  oracle::Rng rng(152);
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpaceSystem sys = random_system(rng, 7, 2, 3);
    const Matrix Q = rng.orthogonal(7);
    const double a = h2_norm(sys);
    const double b = h2_norm(Q.transpose() * sys.dense_A() * Q, Q.transpose() * sys.B,
                             sys.C * Q);
    EXPECT_LE(std::abs(a - b), 1e-10 * a);
  }
}

TEST(H2Error, ExactAndEmptyModels) {
  oracle::Rng rng(161);
  const StateSpaceSystem sys = random_system(rng, 6, 1, 1);
  const Matrix I = Matrix::Identity(6, 6);
  const auto exact = h2_error(sys, reduce(sys, I, I));
  ASSERT_TRUE(exact.has_value());
  EXPECT_LE(*exact, 1e-7);

  ReducedModel empty = reduce(sys, Matrix::Identity(6, 2), Matrix::Identity(6, 2));
  empty.B_r.setZero();
  empty.C_r.setZero();
  EXPECT_NEAR(*h2_error(sys, empty), 1.0, 1e-12);
}

TEST(H2Error, MatchesLiteralBlockErrorSystem) {
  oracle::Rng rng(162);
  for (int trial = 0; trial < 20; ++trial) {
    const StateSpaceSystem sys = random_system(rng, 9, 2, 2);
    const Index r = rng.integer(1, 4);
    const Matrix V = rng.orthogonal(9).leftCols(r);
    const ReducedModel red = reduce(sys, V, V);
    if (!(spectral_abscissa(red.A_r) < 0.0)) continue;
    Matrix Ae = Matrix::Zero(9 + r, 9 + r);
    Ae.topLeftCorner(9, 9) = sys.dense_A();
    Ae.bottomRightCorner(r, r) = red.A_r;
    Matrix Be(9 + r, 2);
    Be << sys.B, red.B_r;
    Matrix Ce(2, 9 + r);
    Ce << sys.C, -red.C_r;
    const double expected = h2_norm(Ae, Be, Ce) / h2_norm(sys);
    const auto got = h2_error(sys, red);
    ASSERT_TRUE(got.has_value());
    EXPECT_LE(std::abs(*got - expected), 1e-7 * std::max(expected, 1e-3));
  }
}

TEST(H2Error, UnstableReducedModelIsFlagged) {
  oracle::Rng rng(163);
  const StateSpaceSystem sys = random_system(rng, 4, 1, 1);
  ReducedModel red = reduce(sys, Matrix::Identity(4, 1), Matrix::Identity(4, 1));
  red.A_r(0, 0) = 1.0;
  EXPECT_FALSE(h2_error(sys, red).has_value());
}

TEST(ConvergenceHistory, ValidatesRecords) {
  ConvergenceHistory h;
  h.add({2, 0.5, std::nullopt, std::nullopt, 0.0});
  EXPECT_THROW(h.add({2, 0.1, std::nullopt, std::nullopt, 0.0}), InvalidArgument);
  EXPECT_THROW(h.add({3, -1.0, std::nullopt, std::nullopt, 0.0}), InvalidArgument);
  EXPECT_THROW(h.add({3, 0.1, std::nan(""), std::nullopt, 0.0}), InvalidArgument);
  h.add({3, 0.1, 0.2, 0.3, 0.0});
  EXPECT_EQ(h.records.size(), 2u);
}

}  // namespace
}  // namespace aremor
