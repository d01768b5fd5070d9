#include "aremor/lqr_metrics.hpp"

#include <cmath>
#include <string>

#include <Eigen/QR>

#include "aremor/errors.hpp"

namespace aremor {

void ConvergenceHistory::add(const IterationRecord& record) {
  if (!records.empty() && record.r <= records.back().r) {
    throw InvalidArgument("history: r must be strictly increasing");
  }
  const auto bad = [](double v) { return !std::isfinite(v) || v < 0.0; };
  if (bad(record.residual) || bad(record.elapsed_s) ||
      (record.gain_error && bad(*record.gain_error)) ||
      (record.h2_error && bad(*record.h2_error))) {
    throw InvalidArgument("history: metric values must be finite and >= 0");
  }
  records.push_back(record);
}

double relative_residual(const StateSpaceSystem& sys, const Matrix& W,
                         const Matrix& P_r) {
  const Index n = sys.n();
  const Index k = W.cols();
  const Index p = sys.p();
  if (W.rows() != n || P_r.rows() != k || P_r.cols() != k) {
    throw InvalidArgument("relative_residual: dimension mismatch");
  }
  const double c_norm2 = sys.C.squaredNorm();
  if (c_norm2 == 0.0) throw InvalidArgument("relative_residual: C is zero");

  // R(W P Wᵀ) = U M Uᵀ with U = [AᵀW, W, Cᵀ].
  Matrix U(n, 2 * k + p);
  U.leftCols(k) = sys.A.transpose() * W;
  U.middleCols(k, k) = W;
  U.rightCols(p) = sys.C.transpose();

  const Matrix B_r = W.transpose() * sys.B;
  const Matrix G_r = B_r * sys.R.llt().solve(B_r.transpose());
  Matrix M = Matrix::Zero(2 * k + p, 2 * k + p);
  M.block(0, k, k, k) = P_r;
  M.block(k, 0, k, k) = P_r;
  M.block(k, k, k, k) = -P_r * G_r * P_r;
  M.bottomRightCorner(p, p).setIdentity();

  Eigen::HouseholderQR<Matrix> qr(U);
  const Index q = std::min(n, U.cols());
  const Matrix Ru = qr.matrixQR().topRows(q).triangularView<Eigen::Upper>();
  return (Ru * M * Ru.transpose()).norm() / c_norm2;
}

double relative_residual(const StateSpaceSystem& sys, const ReducedModel& red,
                         const Matrix& P_r) {
  return relative_residual(sys, red.W, P_r);
}

Matrix lift_gain(const ReducedModel& red, const Matrix& P_r, const Matrix& R) {
  return R.llt().solve(red.B_r.transpose() * P_r * red.W.transpose());
}

double gain_error(const Matrix& K_tilde, const Matrix& K_ref) {
  if (K_tilde.rows() != K_ref.rows() || K_tilde.cols() != K_ref.cols()) {
    throw InvalidArgument("gain_error: dimension mismatch");
  }
  const double ref = K_ref.norm();
  if (ref == 0.0) throw InvalidArgument("gain_error: zero reference gain");
  return (K_tilde - K_ref).norm() / ref;
}

double h2_norm(const Matrix& A, const Matrix& B, const Matrix& C) {
  if (C.size() == 0 || B.size() == 0) return 0.0;
  const Matrix gram = solve_lyapunov(A, B * B.transpose());
  const double value = (C * gram * C.transpose()).trace();
  return std::sqrt(std::max(value, 0.0));
}

double h2_norm(const StateSpaceSystem& sys) {
  return h2_norm(sys.dense_A(), sys.B, sys.C);
}

H2ErrorEvaluator::H2ErrorEvaluator(const StateSpaceSystem& sys)
    : B_(sys.B), C_(sys.C), schur_(real_schur(sys.dense_A())) {
  const Matrix gram = solve_lyapunov(schur_, B_ * B_.transpose());
  full_norm_ = std::sqrt(std::max((C_ * gram * C_.transpose()).trace(), 0.0));
}

std::optional<double> H2ErrorEvaluator::relative_error(
    const ReducedModel& red) const {
  if (full_norm_ == 0.0) {
    throw InvalidArgument("h2_error: full-order transfer function is zero");
  }
  if (red.order() == 0) return 1.0;
  const SchurForm reduced = real_schur(red.A_r);
  for (const Complex& lambda : reduced.eigenvalues()) {
    if (!(lambda.real() < 0.0)) return std::nullopt;
  }
  // Error system diag(A, A_r), [B; B_r], [C, −C_r]: its Gramian has blocks
  // 𝒫, X, 𝒫_r with A X + X A_rᵀ + B B_rᵀ = 0.
  const Matrix X = solve_sylvester(schur_, reduced, B_ * red.B_r.transpose());
  const Matrix reduced_gram =
      solve_lyapunov(reduced, red.B_r * red.B_r.transpose());
  const double squared = full_norm_ * full_norm_ -
                         2.0 * (C_ * X * red.C_r.transpose()).trace() +
                         (red.C_r * reduced_gram * red.C_r.transpose()).trace();
  return std::sqrt(std::max(squared, 0.0)) / full_norm_;
}

std::optional<double> h2_error(const StateSpaceSystem& sys,
                               const ReducedModel& red) {
  return H2ErrorEvaluator(sys).relative_error(red);
}

}  // namespace aremor
