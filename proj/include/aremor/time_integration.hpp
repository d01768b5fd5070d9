#pragma once

#include <vector>

#include "aremor/model_problems.hpp"
#include "aremor/types.hpp"

namespace aremor {

/// Columns of X are states at the matching entries of `times`. When several
/// trajectories are concatenated, `times` restarts at 0 for each one.
struct SnapshotSet {
  Matrix X;
  std::vector<double> times;
};

/// Implicit Euler for ẋ = Aᵀx, x(0) = cᵢ for every row cᵢ of C. Each
/// trajectory contributes steps + 1 columns (initial state included), so the
/// result has p·(steps + 1) columns.
SnapshotSet integrate_adjoint(const StateSpaceSystem& sys, double horizon,
                              int steps);

}  // namespace aremor
