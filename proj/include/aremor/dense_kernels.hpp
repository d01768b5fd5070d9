#pragma once

// Dense linear algebra and small matrix-equation kernels. Everything here
// works on reduced-size (or desk-scale) matrices and is a pure function of
// its inputs.

#include <vector>

#include "aremor/types.hpp"

namespace aremor {

/// Real Schur decomposition A = Q T Qᵀ, T quasi upper triangular with 1×1
/// blocks for real eigenvalues and 2×2 blocks for complex-conjugate pairs.
struct SchurForm {
  Matrix Q;
  Matrix T;

  /// Eigenvalues read off the diagonal blocks of T, in block order.
  std::vector<Complex> eigenvalues() const;
  /// Start index of each diagonal block of T.
  std::vector<Index> block_starts() const;
};

/// Francis double-shift QR on the Hessenberg form, capped at 30·n sweeps.
/// Throws ConvergenceError when the cap is hit.
SchurForm real_schur(const Matrix& A);

/// Eigenvalues of a dense square matrix via real_schur.
std::vector<Complex> eigenvalues(const Matrix& A);

/// Largest real part over the spectrum (spectral abscissa).
double spectral_abscissa(const Matrix& A);

/// Solves A X + X Bᵀ + rhs = 0 given real Schur forms of A and B.
/// Throws SingularOperatorError when λᵢ(A) + λⱼ(B) vanishes to working
/// precision.
Matrix solve_sylvester(const SchurForm& a, const SchurForm& b,
                       const Matrix& rhs);

/// Solves A X + X Bᵀ + rhs = 0. Both A and B must be stable.
Matrix solve_sylvester(const Matrix& A, const Matrix& B, const Matrix& rhs);

/// Bartels–Stewart solve of A X + X Aᵀ + Q = 0 for stable A and symmetric Q.
/// The observability orientation Aᵀ X + X A + CᵀC = 0 is solved by passing Aᵀ.
Matrix solve_lyapunov(const Matrix& A, const Matrix& Q);

/// Same as above with a precomputed Schur form of A.
Matrix solve_lyapunov(const SchurForm& a, const Matrix& Q);

struct DenseAreOptions {
  int max_steps = 50;
  /// Target for ‖R(P)‖_F / ‖C‖_F².
  double tolerance = 1e-12;
  /// For unstable A, start from the stable invariant subspace of the
  /// Hamiltonian matrix instead of failing on P₀ = 0.
  bool stabilizing_start = true;
};

struct DenseAreResult {
  Matrix P;
  /// ‖AᵀP + PA − PBR⁻¹BᵀP + CᵀC‖_F / ‖C‖_F² at exit.
  double relative_residual = 0.0;
  int steps = 0;
  /// Relative residual after every Newton step (entry k is after step k+1).
  std::vector<double> residual_history;
};

/// Newton–Kleinman solve of Aᵀ P + P A − P B R⁻¹ Bᵀ P + Cᵀ C = 0 started
/// from P₀ = 0 when A is stable. Each step is one Lyapunov solve with the
/// closed-loop matrix. Throws AreSolveError after max_steps or when an iterate
/// loses closed-loop stability.
DenseAreResult solve_dense_are_detailed(const Matrix& A, const Matrix& B,
                                        const Matrix& C, const Matrix& R,
                                        const DenseAreOptions& options = {});

Matrix solve_dense_are(const Matrix& A, const Matrix& B, const Matrix& C,
                       const Matrix& R);

/// Dense residual AᵀP + PA − PBR⁻¹BᵀP + CᵀC.
Matrix are_residual(const Matrix& A, const Matrix& B, const Matrix& C,
                    const Matrix& R, const Matrix& P);

struct ThinSvd {
  Matrix U;   ///< rows × k, orthonormal columns
  Vector S;   ///< k nonnegative, nonincreasing
  Matrix Vt;  ///< k × cols, orthonormal rows
};

/// Thin SVD, k = min(rows, cols).
ThinSvd thin_svd(const Matrix& X);

/// Thin QR factors Q (orthonormal columns) and square upper-triangular R.
struct QrFactors {
  Matrix Q;
  Matrix R;
};

struct QrAppendResult {
  QrFactors factors;
  /// Indices into new_cols that were numerically dependent and skipped.
  std::vector<Index> dependent_columns;

  bool rank_deficient() const { return !dependent_columns.empty(); }
};

/// Appends new_cols to the factorization of M using Gram–Schmidt with one
/// reorthogonalization pass. A column whose remaining norm falls below
/// 1e-13 of its original norm is reported and left out of the factors.
QrAppendResult qr_append(const QrFactors& existing, const Matrix& new_cols);

/// Square-root factor F with X = F Fᵀ for a symmetric positive
/// semidefinite X (eigendecomposition; negative round-off eigenvalues are
/// clipped to zero).
Matrix psd_sqrt_factor(const Matrix& X);

/// max |X − Xᵀ| / max |X| (0 for the zero matrix).
double symmetry_error(const Matrix& X);

}  // namespace aremor
