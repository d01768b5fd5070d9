#include "aremor/time_integration.hpp"

#include <Eigen/SparseLU>

#include "aremor/errors.hpp"

namespace aremor {

SnapshotSet integrate_adjoint(const StateSpaceSystem& sys, double horizon,
                              int steps) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (steps < 1) throw InvalidArgument("steps must be at least 1");
  if (sys.p() < 1) throw InvalidArgument("system has no outputs");

  const Index n = sys.n();
  const double dt = horizon / steps;
  Eigen::SparseMatrix<double> M = -dt * Eigen::SparseMatrix<double>(sys.A.transpose());
  for (Index i = 0; i < n; ++i) M.coeffRef(i, i) += 1.0;
  M.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) {
    throw SingularShiftError("implicit Euler matrix is singular");
  }

  const Index per_run = steps + 1;
  SnapshotSet out;
  out.X.resize(n, sys.p() * per_run);
  out.times.reserve(static_cast<std::size_t>(out.X.cols()));
  for (Index i = 0; i < sys.p(); ++i) {
    Vector x = sys.C.row(i).transpose();
    out.X.col(i * per_run) = x;
    out.times.push_back(0.0);
    for (int k = 1; k <= steps; ++k) {
      x = lu.solve(x);
      out.X.col(i * per_run + k) = x;
      out.times.push_back(k * dt);
    }
  }
  if (!out.X.allFinite()) {
    throw SingularShiftError("implicit Euler produced non-finite snapshots");
  }
  return out;
}

}  // namespace aremor
