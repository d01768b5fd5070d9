#pragma once

#include <optional>
#include <string>
#include <vector>

#include "aremor/dense_kernels.hpp"
#include "aremor/model_problems.hpp"
#include "aremor/system_reduction.hpp"
#include "aremor/types.hpp"

namespace aremor {

struct IterationRecord {
  Index r = 0;                      ///< space dimension
  double residual = 0.0;            ///< R_P
  std::optional<double> gain_error; ///< E_K, absent without a reference
  std::optional<double> h2_error;   ///< E_G, absent without a reference or
                                    ///< when A_r is unstable
  double elapsed_s = 0.0;           ///< wall time since the method started
};

struct ConvergenceHistory {
  std::vector<IterationRecord> records;
  /// Free-form notes: warnings, instabilities, breakdowns.
  std::vector<std::string> events;

  /// Appends a record; r must exceed the previous record's r and metrics
  /// must be finite and nonnegative.
  void add(const IterationRecord& record);
  bool empty() const { return records.empty(); }
  const IterationRecord& back() const { return records.back(); }
};

/// R_P = ‖R(P_r)‖_F / ‖C‖_F² for the approximation P ≈ W P_r Wᵀ, where
///   R(X) = AᵀX + XA − X B R⁻¹ Bᵀ X + CᵀC.
/// Evaluated through a thin QR of [AᵀW, W, Cᵀ]; no n × n matrix is formed.
double relative_residual(const StateSpaceSystem& sys, const Matrix& W,
                         const Matrix& P_r);

double relative_residual(const StateSpaceSystem& sys, const ReducedModel& red,
                         const Matrix& P_r);

/// Full-state gain induced by the surrogate: K̃ = R⁻¹ B_rᵀ P_r Wᵀ.
Matrix lift_gain(const ReducedModel& red, const Matrix& P_r, const Matrix& R);

/// ‖K̃ − K‖_F / ‖K‖_F. Throws InvalidArgument for a zero reference.
double gain_error(const Matrix& K_tilde, const Matrix& K_ref);

/// ‖G‖_H2 with ‖G‖²_H2 = (1/2π)∫‖G(iω)‖_F² dω = trace(C 𝒫 Cᵀ),
/// A𝒫 + 𝒫Aᵀ + BBᵀ = 0. A must be stable.
double h2_norm(const Matrix& A, const Matrix& B, const Matrix& C);
double h2_norm(const StateSpaceSystem& sys);

/// Caches the full-order Schur form and reachability Gramian so that
/// ‖G − G_r‖_H2 / ‖G‖_H2 costs one n × r Sylvester solve per reduced model.
class H2ErrorEvaluator {
 public:
  explicit H2ErrorEvaluator(const StateSpaceSystem& sys);

  double full_norm() const { return full_norm_; }

  /// Empty when A_r is not stable.
  std::optional<double> relative_error(const ReducedModel& red) const;

 private:
  Matrix B_;
  Matrix C_;
  SchurForm schur_;
  double full_norm_;
};

std::optional<double> h2_error(const StateSpaceSystem& sys,
                               const ReducedModel& red);

}  // namespace aremor
