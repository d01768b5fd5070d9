#include "aremor/system_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "aremor/errors.hpp"

namespace aremor {
namespace {

double spectral_norm_of_columns(const Matrix& X) {
  if (X.cols() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(X.transpose() * X,
                                            Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(eig.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace

ComplexMatrix ReducedModel::transfer(Complex s) const {
  ComplexMatrix shifted = -A_r.cast<Complex>();
  shifted.diagonal().array() += s;
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  return C_r.cast<Complex>() * lu.solve(B_r.cast<Complex>());
}

ReducedModel reduce(const StateSpaceSystem& sys, const Matrix& V,
                    const Matrix& W) {
  if (V.rows() != sys.n() || W.rows() != sys.n() || V.cols() != W.cols()) {
    throw InvalidArgument("reduce: basis dimensions do not match the system");
  }
  const Index r = V.cols();
  const double defect = (W.transpose() * V - Matrix::Identity(r, r)).norm();
  const double scale =
      std::max(1.0, spectral_norm_of_columns(W) * spectral_norm_of_columns(V));
  if (!(defect <= 1e-10 * scale)) {
    throw InvalidArgument("reduce: bases are not biorthogonal (defect " +
                          std::to_string(defect) + ")");
  }
  ReducedModel red;
  red.V = V;
  red.W = W;
  red.A_r = W.transpose() * (sys.A * V);
  red.B_r = W.transpose() * sys.B;
  red.C_r = sys.C * V;
  return red;
}

Index numerical_rank(const Vector& singular_values) {
  if (singular_values.size() == 0) return 0;
  const double top = singular_values.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<Index>(
      (singular_values.array() > 1e-12 * top).count());
}

PodReduction::PodReduction(const SnapshotSet& snapshots)
    : svd_(thin_svd(snapshots.X)), rank_(numerical_rank(svd_.S)) {}

ReducedModel PodReduction::basis(const StateSpaceSystem& sys, Index r) const {
  if (r < 1) throw InvalidArgument("pod_basis: r must be positive");
  if (r > rank_) {
    throw RankError("insufficient snapshot rank: attainable r = " +
                        std::to_string(rank_),
                    static_cast<std::size_t>(rank_));
  }
  const Matrix V = svd_.U.leftCols(r);
  return reduce(sys, V, V);
}

ReducedModel pod_basis(const StateSpaceSystem& sys,
                       const SnapshotSet& snapshots, Index r) {
  return PodReduction(snapshots).basis(sys, r);
}

BalancedTruncation::BalancedTruncation(const StateSpaceSystem& sys) {
  const Matrix A = sys.dense_A();
  reach_ = solve_lyapunov(A, sys.B * sys.B.transpose());
  observe_ = solve_lyapunov(A.transpose(), sys.C.transpose() * sys.C);
  reach_factor_ = psd_sqrt_factor(reach_);
  observe_factor_ = psd_sqrt_factor(observe_);
  hankel_ = thin_svd(observe_factor_.transpose() * reach_factor_);
  rank_ = numerical_rank(hankel_.S);
}

ReducedModel BalancedTruncation::basis(const StateSpaceSystem& sys,
                                       Index r) const {
  if (r < 1) throw InvalidArgument("bt_basis: r must be positive");
  if (r > rank_) {
    throw RankError("Hankel singular value sigma_" + std::to_string(r) +
                        " below tolerance: attainable r = " +
                        std::to_string(rank_),
                    static_cast<std::size_t>(rank_));
  }
  const Vector inv_root = hankel_.S.head(r).cwiseSqrt().cwiseInverse();
  const Matrix W = observe_factor_ * hankel_.U.leftCols(r) * inv_root.asDiagonal();
  Matrix V = reach_factor_ * hankel_.Vt.topRows(r).transpose() *
             inv_root.asDiagonal();
  // restore WᵀV = I lost to rounding in the SVD
  V = V * (W.transpose() * V).partialPivLu().inverse();
  ReducedModel red = reduce(sys, V, W);
  red.hankel_values = hankel_.S;
  return red;
}

ReducedModel bt_basis(const StateSpaceSystem& sys, Index r) {
  return BalancedTruncation(sys).basis(sys, r);
}

}  // namespace aremor
