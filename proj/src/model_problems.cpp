#include "aremor/model_problems.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "aremor/errors.hpp"

namespace aremor {
namespace {

Index intervals_along(double length, double dx, const char* axis) {
  const double ratio = length / dx;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-12 * std::max(1.0, ratio)) {
    throw InvalidArgument(std::string("dx does not divide the domain ") + axis +
                          " extent");
  }
  return static_cast<Index>(rounded);
}

std::vector<double> axis_nodes(double lo, double hi, Index intervals,
                               GridConvention grid) {
  std::vector<double> nodes;
  const Index first = grid == GridConvention::kLattice ? 0 : 1;
  const Index last = grid == GridConvention::kLattice ? intervals : intervals - 1;
  for (Index i = first; i <= last; ++i) {
    nodes.push_back(lo + (hi - lo) * static_cast<double>(i) /
                             static_cast<double>(intervals));
  }
  return nodes;
}

bool inside(double v, double lo, double hi, double tol) {
  return v >= lo - tol && v <= hi + tol;
}

}  // namespace

bool Rect::contains(const Rect& inner) const {
  return inner.x_min >= x_min && inner.x_max <= x_max &&
         inner.y_min >= y_min && inner.y_max <= y_max;
}

void PdeConfig::validate() const {
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  if (!(dx > 0.0)) throw InvalidArgument("dx must be positive");
  if (dimension != 1 && dimension != 2) {
    throw InvalidArgument("dimension must be 1 or 2");
  }
  const auto check = [&](const Rect& r, const char* name) {
    const bool ok1 = r.x_min <= r.x_max && r.x_min >= domain.x_min &&
                     r.x_max <= domain.x_max;
    const bool ok2 = r.y_min <= r.y_max && r.y_min >= domain.y_min &&
                     r.y_max <= domain.y_max;
    if (!ok1 || (dimension == 2 && !ok2)) {
      throw InvalidArgument(std::string(name) + " is not inside the domain");
    }
  };
  if (!(domain.width() > 0.0) || (dimension == 2 && !(domain.height() > 0.0))) {
    throw InvalidArgument("domain is empty");
  }
  check(omega_b, "omega_b");
  check(omega_c, "omega_c");
}

Grid make_grid(const PdeConfig& cfg) {
  cfg.validate();
  Grid grid;
  grid.dx = cfg.dx;
  grid.x = axis_nodes(cfg.domain.x_min, cfg.domain.x_max,
                      intervals_along(cfg.domain.width(), cfg.dx, "x"), cfg.grid);
  if (cfg.dimension == 2) {
    grid.y = axis_nodes(cfg.domain.y_min, cfg.domain.y_max,
                        intervals_along(cfg.domain.height(), cfg.dx, "y"),
                        cfg.grid);
  } else {
    grid.y = {0.0};
  }
  grid.nx = static_cast<Index>(grid.x.size());
  grid.ny = static_cast<Index>(grid.y.size());
  if (grid.size() == 0) throw InvalidArgument("grid has no unknowns");
  return grid;
}

StateSpaceSystem assemble_system(const PdeConfig& cfg) {
  StateSpaceSystem sys;
  sys.grid = make_grid(cfg);
  const Grid& g = sys.grid;
  const Index n = g.size();
  const bool two_d = cfg.dimension == 2;
  const double h = cfg.dx;
  const double diffusion = cfg.epsilon / (h * h);
  const double convection = cfg.gamma / h;

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(5 * n));
  for (Index j = 0; j < g.ny; ++j) {
    for (Index i = 0; i < g.nx; ++i) {
      const Index row = g.index(i, j);
      const double neighbours = two_d ? 4.0 : 2.0;
      const double axes = two_d ? 2.0 : 1.0;
      entries.emplace_back(row, row,
                           -neighbours * diffusion - axes * convection);
      if (i > 0) entries.emplace_back(row, g.index(i - 1, j), diffusion + convection);
      if (i + 1 < g.nx) entries.emplace_back(row, g.index(i + 1, j), diffusion);
      if (two_d) {
        if (j > 0) entries.emplace_back(row, g.index(i, j - 1), diffusion + convection);
        if (j + 1 < g.ny) entries.emplace_back(row, g.index(i, j + 1), diffusion);
      }
    }
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(entries.begin(), entries.end());
  sys.A.makeCompressed();

  const double tol = 1e-9 * h;
  const auto in_rect = [&](const Rect& r, Index i, Index j) {
    return inside(g.x[static_cast<std::size_t>(i)], r.x_min, r.x_max, tol) &&
           (!two_d || inside(g.y[static_cast<std::size_t>(j)], r.y_min, r.y_max, tol));
  };

  sys.B = Matrix::Zero(n, 1);
  sys.C = Matrix::Zero(1, n);
  const double area = two_d ? cfg.omega_c.width() * cfg.omega_c.height()
                            : cfg.omega_c.width();
  const double cell = two_d ? h * h : h;
  Index b_count = 0;
  Index c_count = 0;
  for (Index j = 0; j < g.ny; ++j) {
    for (Index i = 0; i < g.nx; ++i) {
      if (in_rect(cfg.omega_b, i, j)) {
        sys.B(g.index(i, j), 0) = 1.0;
        ++b_count;
      }
      if (in_rect(cfg.omega_c, i, j)) {
        sys.C(0, g.index(i, j)) = area > 0.0 ? cell / area : 1.0;
        ++c_count;
      }
    }
  }
  if (b_count == 0 || c_count == 0) {
    throw InvalidArgument("empty actuator/observation region");
  }
  if (!(area > 0.0)) {
    // degenerate Ω_C: plain average over the nodes it contains
    sys.C /= static_cast<double>(c_count);
  }
  sys.R = Matrix::Identity(1, 1);
  return sys;
}

StateSpaceSystem make_system(const Matrix& A, const Matrix& B, const Matrix& C,
                             const Matrix& R) {
  if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows()) {
    throw InvalidArgument("make_system: dimension mismatch");
  }
  StateSpaceSystem sys;
  sys.A = A.sparseView();
  sys.A.makeCompressed();
  sys.B = B;
  sys.C = C;
  sys.R = R.size() == 0 ? Matrix::Identity(B.cols(), B.cols()) : R;
  if (sys.R.rows() != B.cols() || sys.R.cols() != B.cols()) {
    throw InvalidArgument("make_system: R has the wrong size");
  }
  sys.grid.nx = A.rows();
  return sys;
}

ComplexMatrix eval_transfer(const StateSpaceSystem& sys, Complex s) {
  const Index n = sys.n();
  Eigen::SparseMatrix<Complex> shifted = -sys.A.cast<Complex>();
  for (Index i = 0; i < n; ++i) shifted.coeffRef(i, i) += s;
  shifted.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    throw SingularShiftError("frequency hits spectrum");
  }
  const ComplexMatrix X = lu.solve(sys.B.cast<Complex>());
  if (lu.info() != Eigen::Success || !X.allFinite()) {
    throw SingularShiftError("frequency hits spectrum");
  }
  return sys.C.cast<Complex>() * X;
}

double passivity_margin(const SparseMatrix& A) {
  const Matrix dense(A);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (dense + dense.transpose()),
                                            Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

}  // namespace aremor
