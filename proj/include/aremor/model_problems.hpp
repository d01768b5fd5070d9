#pragma once

// Finite-difference LQR instances for
//   w_t − ε Δw + γ w_x + γ w_y = 1_{Ω_B} u   on a rectangle, zero Dirichlet,
//   s(t) = |Ω_C|⁻¹ ∫_{Ω_C} w dx
// and transfer-function evaluation G(s) = C (sI − A)⁻¹ B.

#include <vector>

#include "aremor/types.hpp"

namespace aremor {

/// Closed axis-aligned rectangle [x_min, x_max] × [y_min, y_max].
struct Rect {
  double x_min = 0.0;
  double x_max = 1.0;
  double y_min = 0.0;
  double y_max = 1.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  bool contains(const Rect& inner) const;
};

/// Where the unknowns sit relative to the Dirichlet boundary.
enum class GridConvention {
  /// Every lattice point x_min, x_min + Δx, …, x_max is an unknown; the zero
  /// boundary values live one spacing outside the rectangle. Reproduces
  /// n = 441 for the two reference experiments.
  kLattice,
  /// Classic layout: lattice points on the rectangle edges carry the
  /// boundary values, only strictly interior points are unknowns.
  kInterior,
};

struct PdeConfig {
  double epsilon = 1.0;  ///< diffusion coefficient
  double gamma = 0.0;    ///< convection speed along +x and +y
  Rect domain{0.0, 1.0, 0.0, 1.0};
  Rect omega_b{0.2, 0.8, 0.2, 0.8};
  Rect omega_c{0.1, 0.9, 0.1, 0.9};
  double dx = 0.05;
  GridConvention grid = GridConvention::kLattice;
  /// 1 uses only the x extents of the rectangles.
  int dimension = 2;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

/// Node coordinates of the unknowns, x fastest.
struct Grid {
  Index nx = 0;
  Index ny = 1;
  double dx = 0.0;
  std::vector<double> x;  ///< nx coordinates
  std::vector<double> y;  ///< ny coordinates (a single 0 in 1-D)

  Index size() const { return nx * ny; }
  Index index(Index i, Index j) const { return j * nx + i; }
};

struct StateSpaceSystem {
  SparseMatrix A;  ///< n × n
  Matrix B;        ///< n × m
  Matrix C;        ///< p × n
  Matrix R;        ///< m × m control weight, symmetric positive definite
  Grid grid;

  Index n() const { return A.rows(); }
  Index m() const { return B.cols(); }
  Index p() const { return C.rows(); }
  Matrix dense_A() const { return Matrix(A); }
};

Grid make_grid(const PdeConfig& cfg);

/// Centered five-point diffusion plus backward (upwind for γ ≥ 0)
/// differences for the convection term; B is the node indicator of Ω_B and
/// C the rectangle-rule average over Ω_C. R = I.
StateSpaceSystem assemble_system(const PdeConfig& cfg);

/// Wraps dense matrices as a state-space system (R defaults to identity).
StateSpaceSystem make_system(const Matrix& A, const Matrix& B, const Matrix& C,
                             const Matrix& R = Matrix());

/// G(s) = C (sI − A)⁻¹ B, one sparse complex LU solve per input column.
/// Throws SingularShiftError when sI − A is singular to working precision.
ComplexMatrix eval_transfer(const StateSpaceSystem& sys, Complex s);

/// Largest eigenvalue of (A + Aᵀ)/2 (dense; meant for n in the low
/// thousands). Negative means A is passive.
double passivity_margin(const SparseMatrix& A);

}  // namespace aremor
