#include <cmath>

#include <gtest/gtest.h>

#include "aremor/dense_kernels.hpp"
#include "aremor/errors.hpp"
#include "aremor/lqr_metrics.hpp"
#include "aremor/system_reduction.hpp"
#include "oracles.hpp"

namespace aremor {
namespace {

StateSpaceSystem heat_system() {
  PdeConfig cfg;
  cfg.dx = 0.05;
  return assemble_system(cfg);
}

std::vector<double> frequency_grid() {
  std::vector<double> w{0.0};
  for (int k = 0; k <= 120; ++k) w.push_back(std::pow(10.0, -2.0 + 7.0 * k / 120.0));
  return w;
}

TEST(Reduce, FullSpaceIsExact) {
  oracle::Rng rng(81);
  const StateSpaceSystem sys =
      make_system(rng.stable(5), rng.gaussian(5, 2), rng.gaussian(1, 5));
  const Matrix I = Matrix::Identity(5, 5);
  const ReducedModel red = reduce(sys, I, I);
  EXPECT_EQ(red.A_r, sys.dense_A());
  EXPECT_EQ(red.B_r, sys.B);
  EXPECT_EQ(red.C_r, sys.C);
}

TEST(Reduce, CoordinateRestriction) {
  oracle::Rng rng(82);
  const StateSpaceSystem sys =
      make_system(rng.stable(6), rng.gaussian(6, 1), rng.gaussian(1, 6));
  const Matrix E = Matrix::Identity(6, 3);
  EXPECT_EQ(reduce(sys, E, E).A_r, sys.dense_A().topLeftCorner(3, 3));
}

TEST(Reduce, NonBiorthogonalPairIsRejected) {
  oracle::Rng rng(83);
  const StateSpaceSystem sys =
      make_system(rng.stable(4), rng.gaussian(4, 1), rng.gaussian(1, 4));
  EXPECT_THROW(reduce(sys, Matrix::Identity(4, 2), 2.0 * Matrix::Identity(4, 2)),
               InvalidArgument);
}

TEST(Pod, RepeatedColumnGivesNormalizedVector) {
  Vector x(3);
  x << 1, 2, 2;
  SnapshotSet snap{x.replicate(1, 4), {0, 1, 2, 3}};
  const StateSpaceSystem sys =
      make_system(-Matrix::Identity(3, 3), Matrix::Ones(3, 1), x.transpose());
  const PodReduction pod(snap);
  EXPECT_EQ(pod.rank(), 1);
  const ReducedModel red = pod.basis(sys, 1);
  EXPECT_LE((red.V.cwiseAbs() - x.normalized()).norm(), 1e-15);
  EXPECT_THROW(pod.basis(sys, 2), RankError);
}

TEST(Pod, OrderingFollowsColumnNorms) {
  Matrix X = Matrix::Zero(4, 2);
  X(1, 0) = 1.0;
  X(3, 1) = 3.0;
  const PodReduction pod({X, {0, 1}});
  const Matrix& U = pod.left_vectors();
  EXPECT_NEAR(std::abs(U(3, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(U(1, 1)), 1.0, 1e-15);
}

TEST(Pod, HeatSnapshotsTailEnergyAndProjector) {
  const StateSpaceSystem sys = heat_system();
  const SnapshotSet snap = integrate_adjoint(sys, 1.0, 1000);
  const PodReduction pod(snap);
  const Index r = std::min<Index>(30, pod.rank()) - 1;
  ASSERT_GE(r, 10);
  const ReducedModel red = pod.basis(sys, r);
  const Vector& s = pod.singular_values();
  const double tail = std::sqrt(s.tail(s.size() - r).squaredNorm());
  const double proj = (snap.X - red.V * (red.V.transpose() * snap.X)).norm();
  EXPECT_LE(std::abs(proj - tail), 1e-9 * s(0));
  const Matrix VVt = red.V * red.V.transpose();
  EXPECT_LE((VVt * VVt - VVt).norm(), 1e-12);
  // beyond the numerical rank the request is refused with the attainable order
  try {
    pod.basis(sys, 30);
    FAIL() << "expected RankError";
  } catch (const RankError& e) {
    EXPECT_EQ(static_cast<Index>(e.attainable()), pod.rank());
  }
}

TEST(BalancedTruncation, ScalarSystem) {
  const StateSpaceSystem sys = make_system(Matrix::Constant(1, 1, -1.0),
                                           Matrix::Ones(1, 1), Matrix::Ones(1, 1));
  const BalancedTruncation bt(sys);
  EXPECT_NEAR(bt.reachability_gramian()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(bt.observability_gramian()(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(bt.hankel_values()(0), 0.5, 1e-15);
  const ReducedModel red = bt.basis(sys, 1);
  EXPECT_NEAR(red.A_r(0, 0), -1.0, 1e-14);
  EXPECT_NEAR((red.C_r * red.B_r)(0, 0), 1.0, 1e-14);
}

TEST(BalancedTruncation, UnreachableSystemHasNoBasis) {
  const StateSpaceSystem sys =
      make_system(-Matrix::Identity(3, 3), Matrix::Zero(3, 1), Matrix::Ones(1, 3));
  EXPECT_THROW(bt_basis(sys, 1), RankError);
}

TEST(BalancedTruncation, SymmetricHankelValuesMatchGramianProduct) {
  oracle::Rng rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix A = rng.symmetric_stable(8);
    const Matrix B = rng.gaussian(8, 1);
    const StateSpaceSystem sys = make_system(A, B, B.transpose());
    const BalancedTruncation bt(sys);
    const Matrix& R = bt.reachability_gramian();
    const Matrix& O = bt.observability_gramian();
    EXPECT_LE((R - O).norm(), 1e-12 * R.norm());
    Eigen::EigenSolver<Matrix> eig(R * O);
    Vector expected = eig.eigenvalues().real().cwiseMax(0.0).cwiseSqrt();
    std::sort(expected.data(), expected.data() + expected.size(), std::greater<>());
    // compare only values that are resolvable in double precision
    const Vector& s = bt.hankel_values();
    for (Index i = 0; i < s.size(); ++i) {
      if (s(i) > 1e-6 * s(0)) EXPECT_NEAR(s(i), expected(i), 1e-9 * s(0));
    }
  }
}

TEST(BalancedTruncation, HeatSweepIsBalancedStableAndBounded) {
  const StateSpaceSystem sys = heat_system();
  const BalancedTruncation bt(sys);
  const Vector& s = bt.hankel_values();
  const auto omegas = frequency_grid();
  const auto full =
      oracle::frequency_response(sys.dense_A(), sys.B, sys.C, omegas);
  const H2ErrorEvaluator h2(sys);
  std::optional<double> previous;
  for (Index r = 1; r <= std::min<Index>(20, bt.rank()); ++r) {
    const ReducedModel red = bt.basis(sys, r);
    const Matrix Pr = solve_lyapunov(red.A_r, red.B_r * red.B_r.transpose());
    const Matrix Qr = solve_lyapunov(red.A_r.transpose(),
                                     red.C_r.transpose() * red.C_r);
    const Matrix Sigma = s.head(r).asDiagonal();
    EXPECT_LE((Pr - Sigma).norm(), 1e-8 * Sigma.norm()) << "r = " << r;
    EXPECT_LE((Qr - Sigma).norm(), 1e-8 * Sigma.norm()) << "r = " << r;
    EXPECT_LT(spectral_abscissa(red.A_r), 0.0);
    const double bound = 2.0 * s.tail(s.size() - r).sum();
    const double hinf = oracle::hinf_error_sampled(full, red.A_r, red.B_r, red.C_r,
                                                   omegas);
    EXPECT_LE(hinf, bound * (1.0 + 1e-8) + 1e-14) << "r = " << r;
    const auto eg = h2.relative_error(red);
    ASSERT_TRUE(eg.has_value());
    if (previous && *previous > 1e-6) EXPECT_LE(*eg, 1.1 * *previous);
    previous = eg;
  }
}

}  // namespace
}  // namespace aremor
