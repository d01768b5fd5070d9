#pragma once

// Reference computations used only by the tests. Each one takes a route that
// is independent of the library kernel it checks.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Seeded generator for random test instances.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi);
  int integer(int lo, int hi);  // inclusive
  Matrix gaussian(Eigen::Index rows, Eigen::Index cols);
  Matrix orthogonal(Eigen::Index n);
  Matrix symmetric(Eigen::Index n);
  /// Random matrix with spectral abscissa ≤ −margin (shifted Gaussian).
  Matrix stable(Eigen::Index n, double margin = 0.1);
  /// Symmetric negative definite with eigenvalues in [−hi, −lo].
  Matrix symmetric_stable(Eigen::Index n, double lo = 0.5, double hi = 5.0);

 private:
  std::mt19937_64 gen_;
};

/// Solves A X + X Bᵀ + Q = 0 from the Kronecker system
/// (I ⊗ A + B ⊗ I) vec(X) = −vec(Q).
Matrix kron_sylvester(const Matrix& A, const Matrix& B, const Matrix& Q);
Matrix kron_lyapunov(const Matrix& A, const Matrix& Q);

/// Stabilizing ARE solution from the stable invariant subspace of the
/// Hamiltonian [[A, −BR⁻¹Bᵀ], [−CᵀC, −Aᵀ]] (complex eigenvectors).
Matrix hamiltonian_are(const Matrix& A, const Matrix& B, const Matrix& C,
                       const Matrix& R);

/// AᵀP + PA − PBR⁻¹BᵀP + CᵀC, assembled explicitly.
Matrix explicit_are_residual(const Matrix& A, const Matrix& B, const Matrix& C,
                             const Matrix& R, const Matrix& P);

/// Companion matrix of the monic polynomial with the given roots (the set
/// must be closed under conjugation).
Matrix companion_from_roots(const std::vector<Complex>& roots);

/// Greedy matching distance between two eigenvalue multisets (max over the
/// pairing of |a − b|); infinity when sizes differ.
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b);

/// Basis [c, (M − σ₁I)⁻¹c, (M − σ₂I)⁻¹(M − σ₁I)⁻¹c, …] built with dense LU,
/// orthonormalized by Householder QR at the end. Real shifts only.
Matrix dense_rational_krylov(const Matrix& M, const Matrix& seed,
                             const std::vector<double>& shifts);

/// sin of the largest principal angle between range(U) and range(V)
/// (both with orthonormal columns).
double max_principal_sine(const Matrix& U, const Matrix& V);

/// Orthonormal basis of range(X) via Householder QR (X full column rank).
Matrix orthonormal_basis(const Matrix& X);

/// ‖G‖_H2² = (1/2π)∫‖G(iω)‖_F² dω by the substitution ω = tan θ and the
/// midpoint rule on (−π/2, π/2) with `points` nodes.
double h2_norm_quadrature(const Matrix& A, const Matrix& B, const Matrix& C,
                          int points = 4000);

/// Same norm for symmetric A from its eigendecomposition, trapezoid rule on
/// `points` log-spaced frequencies in [lo, hi] (both signs of ω).
double h2_norm_modal_quadrature(const Matrix& A, const Matrix& B,
                                const Matrix& C, double lo, double hi,
                                int points);

/// σ_max(G(iω) − G_r(iω)) maximized over the given frequencies.
double hinf_error_sampled(const Matrix& A, const Matrix& B, const Matrix& C,
                          const Matrix& Ar, const Matrix& Br, const Matrix& Cr,
                          const std::vector<double>& omegas);

/// G(iω) at each frequency, for reuse across many reduced models.
std::vector<ComplexMatrix> frequency_response(const Matrix& A, const Matrix& B,
                                              const Matrix& C,
                                              const std::vector<double>& omegas);

/// Same as above with the full-order response precomputed.
double hinf_error_sampled(const std::vector<ComplexMatrix>& full,
                          const Matrix& Ar, const Matrix& Br, const Matrix& Cr,
                          const std::vector<double>& omegas);

}  // namespace oracle
