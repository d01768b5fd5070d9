#pragma once

// Projection pairs (V, W) computed from the dynamical system alone:
// proper orthogonal decomposition of adjoint snapshots and balanced
// truncation. Either one feeds `reduce`, which forms
//   A_r = WᵀAV,  B_r = WᵀB,  C_r = CV.

#include <optional>

#include "aremor/dense_kernels.hpp"
#include "aremor/model_problems.hpp"
#include "aremor/time_integration.hpp"
#include "aremor/types.hpp"

namespace aremor {

struct ReducedModel {
  Matrix V;    ///< n × r right basis
  Matrix W;    ///< n × r left basis, WᵀV = I
  Matrix A_r;  ///< r × r
  Matrix B_r;  ///< r × m
  Matrix C_r;  ///< p × r
  /// Hankel singular values of the full system (balanced truncation only).
  std::optional<Vector> hankel_values;

  Index order() const { return A_r.rows(); }

  /// G_r(s) = C_r (sI − A_r)⁻¹ B_r.
  ComplexMatrix transfer(Complex s) const;
};

/// Projects the system onto (V, W). Rejects pairs whose biorthogonality
/// defect ‖WᵀV − I‖_F exceeds 1e-10 · max(1, ‖W‖₂‖V‖₂).
ReducedModel reduce(const StateSpaceSystem& sys, const Matrix& V,
                    const Matrix& W);

/// Number of singular values above 1e-12 · σ₁.
Index numerical_rank(const Vector& singular_values);

/// Snapshot POD: V = W = leading left singular vectors of X.
class PodReduction {
 public:
  explicit PodReduction(const SnapshotSet& snapshots);

  const Vector& singular_values() const { return svd_.S; }
  const Matrix& left_vectors() const { return svd_.U; }
  Index rank() const { return rank_; }

  /// Throws RankError("insufficient snapshot rank") when r > rank().
  ReducedModel basis(const StateSpaceSystem& sys, Index r) const;

 private:
  ThinSvd svd_;
  Index rank_;
};

ReducedModel pod_basis(const StateSpaceSystem& sys,
                       const SnapshotSet& snapshots, Index r);

/// Square-root balanced truncation at desk scale: dense Gramians, their
/// eigendecomposition square roots R = ΦΦᵀ, O = ΥΥᵀ and the SVD
/// ΥᵀΦ = U Σ Zᵀ. basis(r) returns W = Υ U_r Σ_r^{-1/2}, V = Φ Z_r Σ_r^{-1/2}.
class BalancedTruncation {
 public:
  explicit BalancedTruncation(const StateSpaceSystem& sys);

  const Vector& hankel_values() const { return hankel_.S; }
  Index rank() const { return rank_; }
  const Matrix& reachability_gramian() const { return reach_; }
  const Matrix& observability_gramian() const { return observe_; }

  /// Throws RankError when σ_r is below 1e-12 · σ₁.
  ReducedModel basis(const StateSpaceSystem& sys, Index r) const;

 private:
  Matrix reach_;
  Matrix observe_;
  Matrix reach_factor_;
  Matrix observe_factor_;
  ThinSvd hankel_;
  Index rank_;
};

ReducedModel bt_basis(const StateSpaceSystem& sys, Index r);

}  // namespace aremor
