#pragma once

// Reduce-while-solve Riccati iterations on adaptive rational Krylov spaces
//
//   K_r(Aᵀ, Cᵀ, σ) = range([Cᵀ, (Aᵀ − σ₂I)⁻¹Cᵀ, …, ∏ⱼ(Aᵀ − σⱼI)⁻¹Cᵀ]).
//
// The Galerkin variant (gark) projects onto one orthonormal basis W. The
// Petrov–Galerkin variant (pgark) grows a second basis V of K_r(A, B, σ)
// with the same poles and keeps WᵀV = I. In both cases the Arnoldi-type
// relation
//
//   AᵀW = W A_rᵀ + ŵ a_rᵀ
//
// gives the Riccati residual norm from small matrices only.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "aremor/dense_kernels.hpp"
#include "aremor/errors.hpp"
#include "aremor/lqr_metrics.hpp"
#include "aremor/model_problems.hpp"
#include "aremor/system_reduction.hpp"
#include "aremor/types.hpp"

namespace aremor {

enum class Projection { kGalerkin, kPetrovGalerkin };

/// Growing rational Krylov basis with its projections and relation data.
struct KrylovState {
  Projection projection = Projection::kGalerkin;
  Matrix W;    ///< n × k; orthonormal (Galerkin) or left basis (PG)
  Matrix V;    ///< n × k right basis (PG only; empty for Galerkin)
  Matrix AtW;  ///< Aᵀ W, extended column by column

  /// Poles used so far, conjugate pairs listed as both members.
  std::vector<Complex> shifts;

  Matrix A_r;  ///< WᵀAV (WᵀAW for Galerkin)
  Matrix B_r;  ///< WᵀB
  Matrix C_r;  ///< CV (CW for Galerkin)

  Matrix w_hat;  ///< n × b next-direction block
  Matrix a_r;    ///< k × b coupling block, AᵀW − W A_rᵀ = ŵ a_rᵀ

  QrFactors w_qr;  ///< QR of W, extended as W grows (PG only)
  Matrix R_W;      ///< triangular factor of [W, ŵ] (PG only)

  Index block_width = 0;  ///< current block width b (shrinks on deflation)
  Index expansions = 0;   ///< number of shift solves performed
  bool exhausted = false; ///< last expansion produced no new direction

  std::vector<std::string> warnings;

  Index dimension() const { return W.cols(); }
};

/// Seeds W with the orthonormalized columns of Cᵀ.
KrylovState start_galerkin(const StateSpaceSystem& sys);

/// Seeds W = Cᵀ, V = B and biorthogonalizes them. Requires p = m. Throws
/// BreakdownError (iteration 0) when CB is numerically singular.
KrylovState start_petrov(const StateSpaceSystem& sys);

struct ShiftOptions {
  /// Points distributed on the boundary of the mirrored Ritz hull.
  Index candidate_points = 200;
  /// Replace the Ritz values of A_r by those of A_r − B_r R⁻¹ B_rᵀ P_r.
  bool use_b_variant = false;
};

/// Greedy pole selection: over the boundary of the convex hull of the
/// mirrored Ritz values θⱼ of the current projection, maximizes
///   ∏ⱼ |s − σⱼ| / ∏ⱼ |s − θⱼ|
/// where σⱼ are the poles already used. The first pole after the seed is the
/// mirrored mean of the seed Ritz values. If the best candidate coincides
/// with a used pole the last pole is doubled. Returned shifts have positive
/// real part; a complex result stands for the conjugate pair.
Complex next_shift(const KrylovState& state, const StateSpaceSystem& sys,
                   const ShiftOptions& options = {},
                   const Matrix* P_r = nullptr);

/// One Galerkin expansion with the given pole: solves (Aᵀ − σI)Z = last
/// block, orthogonalizes Z against W (modified Gram–Schmidt, two passes),
/// drops dependent columns, appends, and refreshes projections and the
/// relation data. A complex σ appends Re Z and Im Z (the conjugate pair).
void expand_galerkin(KrylovState& state, const StateSpaceSystem& sys,
                     Complex shift);

/// One Petrov–Galerkin expansion: W from (Aᵀ − σI)⁻¹, V from (A − σI)⁻¹,
/// two-sided Gram–Schmidt with one re-pass and biorthonormalization of the
/// new pair. Throws BreakdownError when the new pair is (numerically)
/// orthogonal: smallest singular value of the normalized block product below
/// 1e-12. Values below 1e-8 are recorded as warnings.
void expand_petrov(KrylovState& state, const StateSpaceSystem& sys,
                   Complex shift);

/// √2 ‖P_r a_r‖_F, the residual norm when [W, ŵ] is orthonormal.
double galerkin_residual_norm(const Matrix& P_r, const Matrix& a_r);

/// ‖R_W [0, P_r a_r; a_rᵀ P_r, 0] R_Wᵀ‖_F with R_W the triangular factor of
/// [W, ŵ]. Throws InvalidArgument when the sizes are inconsistent.
double pg_residual_norm(const Matrix& P_r, const Matrix& a_r,
                        const Matrix& R_W);

/// Reduced model currently represented by the state.
ReducedModel reduced_model(const KrylovState& state);

struct AreSolution {
  Matrix P_r;
  double residual_norm = 0.0;           ///< ‖R(P_r)‖_F (cheap formula)
  double relative_residual_norm = 0.0;  ///< ‖R(P_r)‖_F / ‖C‖_F²
};

struct KrylovOptions {
  double tol = 1e-8;
  /// Cap on the space dimension in blocks of p columns.
  Index r_max = 60;
  ShiftOptions shifts;
  /// PG only: consecutive iterates whose projected ARE has no stabilizing
  /// solution that are recorded and skipped before the run fails.
  Index max_ill_posed_streak = 3;
  /// Wall-clock budget; exceeded budgets end the run with kTimeLimit.
  std::optional<double> time_limit_s;
};

/// Called once per iteration with the current model and P_r; may fill the
/// optional metrics of the record. Time spent here is not counted in
/// elapsed_s.
using IterationHook = std::function<void(const KrylovState&, const ReducedModel&,
                                         const Matrix& P_r, IterationRecord&)>;

struct KrylovResult {
  AreSolution solution;
  ReducedModel model;
  ConvergenceHistory history;
  std::vector<Complex> shifts;
};

enum class KrylovFailure {
  kNotConverged,
  kBreakdown,
  kReducedAreFailed,
  kTimeLimit,
};

/// Raised by gark/pgark; carries the history accumulated before the failure.
class KrylovError : public Error {
 public:
  KrylovError(KrylovFailure kind, const std::string& what, Index iteration,
              ConvergenceHistory history)
      : Error(what), kind_(kind), iteration_(iteration),
        history_(std::move(history)) {}

  KrylovFailure kind() const { return kind_; }
  Index iteration() const { return iteration_; }
  const ConvergenceHistory& history() const { return history_; }

 private:
  KrylovFailure kind_;
  Index iteration_;
  ConvergenceHistory history_;
};

KrylovResult gark(const StateSpaceSystem& sys, const KrylovOptions& options = {},
                  const IterationHook& hook = {});

KrylovResult pgark(const StateSpaceSystem& sys,
                   const KrylovOptions& options = {},
                   const IterationHook& hook = {});

}  // namespace aremor
