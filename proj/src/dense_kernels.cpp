#include "aremor/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "aremor/errors.hpp"

namespace aremor {
namespace {

struct Block {
  Index start;
  Index size;
};

std::vector<Block> diagonal_blocks(const Matrix& T) {
  std::vector<Block> blocks;
  const Index n = T.rows();
  Index i = 0;
  while (i < n) {
    if (i + 1 < n && T(i + 1, i) != 0.0) {
      blocks.push_back({i, 2});
      i += 2;
    } else {
      blocks.push_back({i, 1});
      i += 1;
    }
  }
  return blocks;
}

void require_finite(const Matrix& X, const char* who) {
  if (!X.allFinite()) {
    throw InvalidArgument(std::string(who) + ": non-finite input");
  }
}

void require_square(const Matrix& X, const char* who) {
  if (X.rows() != X.cols()) {
    throw InvalidArgument(std::string(who) + ": matrix is not square");
  }
}

// Solves T1 Y + Y T2ᵀ = C with T1, T2 upper quasi-triangular.
Matrix solve_quasi_triangular_sylvester(const Matrix& T1, const Matrix& T2,
                                        const Matrix& C) {
  const Index n1 = T1.rows();
  const Index n2 = T2.rows();
  const auto blocks1 = diagonal_blocks(T1);
  const auto blocks2 = diagonal_blocks(T2);
  const double scale =
      std::max({T1.cwiseAbs().maxCoeff(), T2.cwiseAbs().maxCoeff(),
                std::numeric_limits<double>::min()});
  const double singular_tol = 64.0 * std::numeric_limits<double>::epsilon() * scale;

  Matrix Y = Matrix::Zero(n1, n2);
  for (auto jb = blocks2.rbegin(); jb != blocks2.rend(); ++jb) {
    const Index j0 = jb->start;
    const Index js = jb->size;
    const Index jtail = n2 - j0 - js;
    Matrix rhs = C.middleCols(j0, js);
    if (jtail > 0) {
      rhs.noalias() -=
          Y.rightCols(jtail) * T2.block(j0, j0 + js, js, jtail).transpose();
    }
    const Matrix T2jj = T2.block(j0, j0, js, js);

    for (auto ib = blocks1.rbegin(); ib != blocks1.rend(); ++ib) {
      const Index i0 = ib->start;
      const Index is = ib->size;
      const Index itail = n1 - i0 - is;
      Matrix r = rhs.middleRows(i0, is);
      if (itail > 0) {
        r.noalias() -= T1.block(i0, i0 + is, is, itail) *
                       Y.block(i0 + is, j0, itail, js);
      }
      if (is == 1 && js == 1) {
        const double d = T1(i0, i0) + T2jj(0, 0);
        if (std::abs(d) <= singular_tol) {
          throw SingularOperatorError(
              "singular Lyapunov operator: eigenvalue pair sums to zero");
        }
        Y(i0, j0) = r(0, 0) / d;
        continue;
      }
      // (I ⊗ T1ii + T2jj ⊗ I) vec(Y) = vec(r), at most 4×4.
      const Matrix T1ii = T1.block(i0, i0, is, is);
      Matrix K = Matrix::Zero(is * js, is * js);
      for (Index q = 0; q < js; ++q) {
        K.block(q * is, q * is, is, is) += T1ii;
        for (Index p = 0; p < js; ++p) {
          K.block(q * is, p * is, is, is) +=
              T2jj(q, p) * Matrix::Identity(is, is);
        }
      }
      Eigen::FullPivLU<Matrix> lu(K);
      const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
      if (min_pivot <= singular_tol) {
        throw SingularOperatorError(
            "singular Lyapunov operator: eigenvalue pair sums to zero");
      }
      const Vector rv = Eigen::Map<const Vector>(r.data(), r.size());
      const Vector y = lu.solve(rv);
      Y.block(i0, j0, is, js) = Eigen::Map<const Matrix>(y.data(), is, js);
    }
  }
  return Y;
}

void require_stable(const SchurForm& a) {
  for (const Complex& lambda : a.eigenvalues()) {
    if (!(lambda.real() < 0.0)) {
      throw SingularOperatorError(
          "singular Lyapunov operator: coefficient matrix is not stable");
    }
  }
}

}  // namespace

std::vector<Index> SchurForm::block_starts() const {
  std::vector<Index> starts;
  for (const Block& b : diagonal_blocks(T)) starts.push_back(b.start);
  return starts;
}

std::vector<Complex> SchurForm::eigenvalues() const {
  std::vector<Complex> values;
  values.reserve(static_cast<std::size_t>(T.rows()));
  for (const Block& b : diagonal_blocks(T)) {
    if (b.size == 1) {
      values.emplace_back(T(b.start, b.start), 0.0);
      continue;
    }
    const double a = T(b.start, b.start);
    const double bb = T(b.start, b.start + 1);
    const double c = T(b.start + 1, b.start);
    const double d = T(b.start + 1, b.start + 1);
    const double mean = 0.5 * (a + d);
    const double disc = 0.25 * (a - d) * (a - d) + bb * c;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      values.emplace_back(mean + root, 0.0);
      values.emplace_back(mean - root, 0.0);
    } else {
      const double root = std::sqrt(-disc);
      values.emplace_back(mean, root);
      values.emplace_back(mean, -root);
    }
  }
  return values;
}

SchurForm real_schur(const Matrix& A) {
  require_square(A, "real_schur");
  require_finite(A, "real_schur");
  const Index n = A.rows();
  if (n == 0) return {Matrix(0, 0), Matrix(0, 0)};
  Eigen::RealSchur<Matrix> schur(n);
  schur.setMaxIterations(30 * n);
  schur.compute(A);
  if (schur.info() != Eigen::Success) {
    throw ConvergenceError("schur did not converge");
  }
  return {schur.matrixU(), schur.matrixT()};
}

std::vector<Complex> eigenvalues(const Matrix& A) {
  return real_schur(A).eigenvalues();
}

double spectral_abscissa(const Matrix& A) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Complex& lambda : eigenvalues(A)) best = std::max(best, lambda.real());
  return best;
}

Matrix solve_sylvester(const SchurForm& a, const SchurForm& b,
                       const Matrix& rhs) {
  if (rhs.rows() != a.T.rows() || rhs.cols() != b.T.rows()) {
    throw InvalidArgument("solve_sylvester: dimension mismatch");
  }
  const Matrix C = -(a.Q.transpose() * rhs * b.Q);
  const Matrix Y = solve_quasi_triangular_sylvester(a.T, b.T, C);
  return a.Q * Y * b.Q.transpose();
}

Matrix solve_sylvester(const Matrix& A, const Matrix& B, const Matrix& rhs) {
  return solve_sylvester(real_schur(A), real_schur(B), rhs);
}

Matrix solve_lyapunov(const SchurForm& a, const Matrix& Q) {
  require_stable(a);
  Matrix X = solve_sylvester(a, a, Q);
  return 0.5 * (X + X.transpose());
}

Matrix solve_lyapunov(const Matrix& A, const Matrix& Q) {
  require_square(A, "solve_lyapunov");
  if (Q.rows() != A.rows() || Q.cols() != A.cols()) {
    throw InvalidArgument("solve_lyapunov: dimension mismatch");
  }
  require_finite(Q, "solve_lyapunov");
  return solve_lyapunov(real_schur(A), Q);
}

Matrix are_residual(const Matrix& A, const Matrix& B, const Matrix& C,
                    const Matrix& R, const Matrix& P) {
  const Matrix BtP = B.transpose() * P;
  return A.transpose() * P + P * A - BtP.transpose() * R.llt().solve(BtP) +
         C.transpose() * C;
}

namespace {

// P₀ = Re(X₂X₁⁻¹) from the eigenvectors of [[A, −G], [−Q, −Aᵀ]] that belong
// to eigenvalues with negative real part.
Matrix hamiltonian_start(const Matrix& A, const Matrix& B, const Matrix& Q,
                         const Eigen::LLT<Matrix>& r_chol) {
  const Index n = A.rows();
  Matrix H(2 * n, 2 * n);
  H << A, -B * r_chol.solve(B.transpose()), -Q, -A.transpose();
  Eigen::EigenSolver<Matrix> eig(H);
  if (eig.info() != Eigen::Success) {
    throw AreSolveError("ARE solve failed: Hamiltonian eigensolver failed", 0.0);
  }
  const double scale = std::max(1.0, H.norm());
  ComplexMatrix X(2 * n, n);
  Index k = 0;
  for (Index j = 0; j < 2 * n; ++j) {
    const Complex lambda = eig.eigenvalues()(j);
    if (lambda.real() < -1e-12 * scale) {
      if (k == n) break;
      X.col(k++) = eig.eigenvectors().col(j);
    }
  }
  if (k != n) {
    throw AreSolveError(
        "ARE solve failed: Hamiltonian matrix has eigenvalues on the "
        "imaginary axis (not stabilizable or not detectable)",
        0.0);
  }
  Eigen::FullPivLU<ComplexMatrix> lu(X.topRows(n));
  if (!lu.isInvertible()) {
    throw AreSolveError("ARE solve failed: stable subspace is not a graph",
                        0.0);
  }
  const Matrix P =
      (X.bottomRows(n) * lu.inverse()).real();
  return 0.5 * (P + P.transpose());
}

}  // namespace

DenseAreResult solve_dense_are_detailed(const Matrix& A, const Matrix& B,
                                        const Matrix& C, const Matrix& R,
                                        const DenseAreOptions& options) {
  require_square(A, "solve_dense_are");
  const Index n = A.rows();
  if (B.rows() != n || C.cols() != n || R.rows() != B.cols() ||
      R.cols() != B.cols()) {
    throw InvalidArgument("solve_dense_are: dimension mismatch");
  }
  Eigen::LLT<Matrix> r_chol(R);
  if (r_chol.info() != Eigen::Success) {
    throw InvalidArgument("solve_dense_are: R is not positive definite");
  }

  DenseAreResult result;
  result.P = Matrix::Zero(n, n);
  const double c_norm2 = C.squaredNorm();
  if (c_norm2 == 0.0 || n == 0) return result;

  const Matrix CtC = C.transpose() * C;
  const auto relative_residual = [&](const Matrix& P) {
    return are_residual(A, B, C, R, P).norm() / c_norm2;
  };

  Matrix P = result.P;
  if (options.stabilizing_start && !(spectral_abscissa(A) < 0.0)) {
    P = hamiltonian_start(A, B, CtC, r_chol);
  }
  double residual = relative_residual(P);
  bool polished = false;
  for (int step = 1; step <= options.max_steps; ++step) {
    const Matrix K = r_chol.solve(B.transpose() * P);
    const Matrix closed_loop = A - B * K;
    Matrix next;
    try {
      next = solve_lyapunov(closed_loop.transpose(),
                            CtC + K.transpose() * R * K);
    } catch (const SingularOperatorError& e) {
      throw AreSolveError(
          std::string("ARE solve failed: Newton iterate is not stabilizing (") +
              e.what() + ")",
          residual);
    }
    const double next_residual = relative_residual(next);
    result.residual_history.push_back(next_residual);
    result.steps = step;

    if (polished) {
      // one extra step past the tolerance; keep whichever is better
      if (next_residual <= residual) {
        P = next;
        residual = next_residual;
      }
      break;
    }
    P = next;
    residual = next_residual;
    if (residual <= options.tolerance) polished = true;
  }
  if (!(residual <= options.tolerance)) {
    throw AreSolveError("ARE solve failed: Newton iteration did not reach "
                        "the residual tolerance",
                        residual);
  }
  const Matrix closed_loop = A - B * r_chol.solve(B.transpose() * P);
  if (!(spectral_abscissa(closed_loop) < 0.0)) {
    throw AreSolveError("ARE solve failed: closed loop is not stable",
                        residual);
  }
  result.P = 0.5 * (P + P.transpose());
  result.relative_residual = residual;
  return result;
}

Matrix solve_dense_are(const Matrix& A, const Matrix& B, const Matrix& C,
                       const Matrix& R) {
  return solve_dense_are_detailed(A, B, C, R).P;
}

ThinSvd thin_svd(const Matrix& X) {
  require_finite(X, "thin_svd");
  if (X.size() == 0) {
    const Index k = std::min(X.rows(), X.cols());
    return {Matrix(X.rows(), k), Vector(k), Matrix(k, X.cols())};
  }
  Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV().transpose()};
}

QrAppendResult qr_append(const QrFactors& existing, const Matrix& new_cols) {
  QrAppendResult out;
  Matrix Q = existing.Q;
  Matrix R = existing.R;
  Index k = Q.cols();
  const Index n = k > 0 ? Q.rows() : new_cols.rows();
  if (k > 0 && new_cols.rows() != n) {
    throw InvalidArgument("qr_append: row count mismatch");
  }
  if (R.rows() != k || R.cols() != k) {
    throw InvalidArgument("qr_append: inconsistent existing factors");
  }
  if (Q.rows() != n) Q.resize(n, 0);

  for (Index j = 0; j < new_cols.cols(); ++j) {
    const double original = new_cols.col(j).norm();
    Vector v = new_cols.col(j);
    Vector h = Vector::Zero(k);
    for (int pass = 0; pass < 2; ++pass) {
      const Vector c = Q.transpose() * v;
      v.noalias() -= Q * c;
      h += c;
    }
    const double rho = v.norm();
    if (original == 0.0 || rho < 1e-13 * original) {
      out.dependent_columns.push_back(j);
      continue;
    }
    Q.conservativeResize(n, k + 1);
    Q.col(k) = v / rho;
    R.conservativeResize(k + 1, k + 1);
    R.col(k).head(k) = h;
    R.row(k).head(k).setZero();
    R(k, k) = rho;
    ++k;
  }
  out.factors = {std::move(Q), std::move(R)};
  return out;
}

Matrix psd_sqrt_factor(const Matrix& X) {
  require_square(X, "psd_sqrt_factor");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (X + X.transpose()));
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("psd_sqrt_factor: eigensolver did not converge");
  }
  const Vector roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal();
}

double symmetry_error(const Matrix& X) {
  if (X.size() == 0) return 0.0;
  const double scale = X.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (X - X.transpose()).cwiseAbs().maxCoeff() / scale;
}

}  // namespace aremor
