#include "aremor/rational_krylov.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/QR>
#include <Eigen/SparseLU>

namespace aremor {
namespace {

using ColSparse = Eigen::SparseMatrix<double>;

constexpr double kDeflationTol = 1e-12;
constexpr double kBreakdownTol = 1e-12;
constexpr double kNearBreakdownTol = 1e-8;
constexpr double kBiorthogonalityTol = 1e-8;

bool is_real_shift(Complex s) {
  return std::abs(s.imag()) <= 1e-10 * std::abs(s);
}

template <typename Scalar>
Eigen::SparseMatrix<Scalar> shifted_operator(const ColSparse& M, Scalar shift) {
  Eigen::SparseMatrix<Scalar> I(M.rows(), M.cols());
  I.setIdentity();
  Eigen::SparseMatrix<Scalar> S = M.cast<Scalar>() - shift * I;
  S.makeCompressed();
  return S;
}

// (M − σI)⁻¹ rhs; for complex σ the real and imaginary parts are returned
// side by side, which spans the same space as the solves with σ and σ̄.
Matrix shifted_solve(const ColSparse& M, Complex shift, const Matrix& rhs) {
  if (is_real_shift(shift)) {
    Eigen::SparseLU<ColSparse> lu;
    lu.compute(shifted_operator<double>(M, shift.real()));
    if (lu.info() != Eigen::Success) {
      throw SingularShiftError("shifted solve is singular: shift hits the spectrum");
    }
    Matrix Z = lu.solve(rhs);
    if (!Z.allFinite()) {
      throw SingularShiftError("shifted solve is singular: shift hits the spectrum");
    }
    return Z;
  }
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu;
  lu.compute(shifted_operator<Complex>(M, shift));
  if (lu.info() != Eigen::Success) {
    throw SingularShiftError("shifted solve is singular: shift hits the spectrum");
  }
  const ComplexMatrix Z = lu.solve(rhs.cast<Complex>());
  if (!Z.allFinite()) {
    throw SingularShiftError("shifted solve is singular: shift hits the spectrum");
  }
  Matrix out(rhs.rows(), 2 * rhs.cols());
  out << Z.real(), Z.imag();
  return out;
}

// z ← z − basis_i (dualᵢᵀ z) for every column i, one column at a time.
// dual == basis gives ordinary modified Gram–Schmidt.
void mgs_pass(Eigen::Ref<Vector> z, const Matrix& basis, const Matrix& dual) {
  for (Index i = 0; i < basis.cols(); ++i) {
    z -= dual.col(i).dot(z) * basis.col(i);
  }
}

// Orthogonalizes the columns of Z against `basis` along `dual` (two passes)
// and orthonormalizes what remains; columns whose norm drops below
// kDeflationTol of their original norm are discarded.
Matrix orthogonalize_block(const Matrix& basis, const Matrix& dual,
                           const Matrix& Z) {
  Matrix kept(Z.rows(), 0);
  for (Index j = 0; j < Z.cols(); ++j) {
    Vector z = Z.col(j);
    const double original = z.norm();
    if (original == 0.0) continue;
    for (int pass = 0; pass < 2; ++pass) {
      mgs_pass(z, basis, dual);
      mgs_pass(z, kept, kept);
    }
    const double remaining = z.norm();
    if (remaining <= kDeflationTol * original) continue;
    kept.conservativeResize(Eigen::NoChange, kept.cols() + 1);
    kept.col(kept.cols() - 1) = z / remaining;
  }
  return kept;
}

void append_columns(Matrix& X, const Matrix& extra) {
  const Index k = X.cols();
  X.conservativeResize(extra.rows(), k + extra.cols());
  X.rightCols(extra.cols()) = extra;
}

// Recomputes the projections and the relation AᵀW = W A_rᵀ + ŵ a_rᵀ.
void refresh(KrylovState& s, const StateSpaceSystem& sys) {
  const bool galerkin = s.projection == Projection::kGalerkin;
  const Matrix& right = galerkin ? s.W : s.V;
  const Matrix T = right.transpose() * s.AtW;  // A_rᵀ
  s.A_r = T.transpose();
  s.B_r = s.W.transpose() * sys.B;
  s.C_r = sys.C * right;

  // (I − W Vᵀ) AᵀW has rank at most b for a rational Krylov space.
  const Matrix F = s.AtW - s.W * T;
  const ThinSvd svd = thin_svd(F);
  const Index b = std::min<Index>(s.block_width, svd.S.size());
  s.w_hat = svd.U.leftCols(b);
  s.a_r = svd.Vt.topRows(b).transpose() * svd.S.head(b).asDiagonal();

  if (!galerkin) {
    const QrAppendResult extended = qr_append(s.w_qr, s.w_hat);
    if (!extended.rank_deficient()) {
      s.R_W = extended.factors.R;
    } else {
      Matrix stacked(s.W.rows(), s.W.cols() + b);
      stacked << s.W, s.w_hat;
      Eigen::HouseholderQR<Matrix> qr(stacked);
      const Index rows = std::min(stacked.rows(), stacked.cols());
      s.R_W = qr.matrixQR().topRows(rows).triangularView<Eigen::Upper>();
    }
  }
}

ColSparse transposed(const SparseMatrix& A) { return ColSparse(A.transpose()); }

ColSparse column_major(const SparseMatrix& A) { return ColSparse(A); }

void record_shift(KrylovState& s, Complex shift) {
  if (is_real_shift(shift)) {
    s.shifts.emplace_back(shift.real(), 0.0);
  } else {
    s.shifts.push_back(shift);
    s.shifts.push_back(std::conj(shift));
  }
  ++s.expansions;
}

void update_block_width(KrylovState& s, Index produced, Index kept, bool complex) {
  if (kept == 0) {
    s.exhausted = true;
    return;
  }
  if (kept < produced) {
    s.block_width = std::min(s.block_width, complex ? (kept + 1) / 2 : kept);
  }
}

// Scales a new pair so that Wnᵀ Vn = I; returns the smallest singular value
// of Wnᵀ Vn for orthonormal Wn, Vn.
double biorthonormalize(Matrix& Wn, Matrix& Vn) {
  const ThinSvd svd = thin_svd(Wn.transpose() * Vn);
  const double smallest = svd.S.size() ? svd.S.minCoeff() : 0.0;
  if (smallest > 0.0) {
    const Vector inv_root = svd.S.cwiseSqrt().cwiseInverse();
    Wn = Wn * svd.U * inv_root.asDiagonal();
    Vn = Vn * svd.Vt.transpose() * inv_root.asDiagonal();
  }
  return smallest;
}

struct Point {
  double x;
  double y;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Andrew's monotone chain; collinear points are dropped.
std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point& a, const Point& b) {
                          return a.x == b.x && a.y == b.y;
                        }),
            pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const Point& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Complex> hull_boundary(const std::vector<Complex>& points,
                                   Index count) {
  double scale = 0.0;
  for (const Complex& z : points) scale = std::max(scale, std::abs(z));
  std::vector<Point> pts;
  for (const Complex& z : points) {
    // snap round-off imaginary parts so real spectra give a segment
    const double y = std::abs(z.imag()) <= 1e-10 * scale ? 0.0 : z.imag();
    pts.push_back({z.real(), y});
  }
  const std::vector<Point> hull = convex_hull(pts);
  std::vector<Complex> out;
  if (hull.size() == 1) {
    out.emplace_back(hull[0].x, hull[0].y);
    return out;
  }
  if (hull.size() == 2) {
    for (Index i = 0; i < count; ++i) {
      const double t = count > 1 ? static_cast<double>(i) / (count - 1) : 0.0;
      out.emplace_back(hull[0].x + t * (hull[1].x - hull[0].x),
                       hull[0].y + t * (hull[1].y - hull[0].y));
    }
    return out;
  }
  std::vector<double> lengths;
  double perimeter = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    lengths.push_back(std::hypot(b.x - a.x, b.y - a.y));
    perimeter += lengths.back();
  }
  for (const Point& v : hull) out.emplace_back(v.x, v.y);
  std::size_t edge = 0;
  double edge_start = 0.0;
  for (Index i = 0; i < count; ++i) {
    const double arc = perimeter * static_cast<double>(i) / count;
    while (edge + 1 < lengths.size() && arc > edge_start + lengths[edge]) {
      edge_start += lengths[edge];
      ++edge;
    }
    const double t = lengths[edge] > 0.0 ? (arc - edge_start) / lengths[edge] : 0.0;
    const Point& a = hull[edge];
    const Point& b = hull[(edge + 1) % hull.size()];
    out.emplace_back(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
  }
  return out;
}

}  // namespace

KrylovState start_galerkin(const StateSpaceSystem& sys) {
  KrylovState s;
  s.projection = Projection::kGalerkin;
  const Matrix empty(sys.n(), 0);
  s.W = orthogonalize_block(empty, empty, sys.C.transpose());
  if (s.W.cols() == 0) throw InvalidArgument("start_galerkin: C is zero");
  s.block_width = s.W.cols();
  s.AtW = sys.A.transpose() * s.W;
  refresh(s, sys);
  return s;
}

KrylovState start_petrov(const StateSpaceSystem& sys) {
  if (sys.p() != sys.m()) {
    throw InvalidArgument("start_petrov: needs as many inputs as outputs");
  }
  KrylovState s;
  s.projection = Projection::kPetrovGalerkin;
  const Matrix empty(sys.n(), 0);
  Matrix Wn = orthogonalize_block(empty, empty, sys.C.transpose());
  Matrix Vn = orthogonalize_block(empty, empty, sys.B);
  if (Wn.cols() == 0 || Vn.cols() == 0) {
    throw InvalidArgument("start_petrov: B or C is zero");
  }
  if (Wn.cols() != Vn.cols()) {
    throw BreakdownError("serious breakdown: B and C have different ranks", 0);
  }
  const double pivot = biorthonormalize(Wn, Vn);
  if (pivot < kBreakdownTol) {
    throw BreakdownError("serious breakdown at iteration 0: CB is singular", 0);
  }
  if (pivot < kNearBreakdownTol) {
    s.warnings.push_back("near breakdown at iteration 0: pivot " +
                         std::to_string(pivot));
  }
  s.W = Wn;
  s.V = Vn;
  s.block_width = Wn.cols();
  s.w_qr = qr_append(QrFactors{Matrix(sys.n(), 0), Matrix(0, 0)}, s.W).factors;
  s.AtW = sys.A.transpose() * s.W;
  refresh(s, sys);
  return s;
}

Complex next_shift(const KrylovState& state, const StateSpaceSystem& sys,
                   const ShiftOptions& options, const Matrix* P_r) {
  // Ritz values always come from the orthogonal projection onto range(W);
  // the right basis reuses the poles of the left one
  const bool galerkin = state.projection == Projection::kGalerkin;
  Matrix H;
  if (galerkin) {
    H = state.A_r;
  } else {
    H = state.w_qr.Q.transpose() * (sys.A * state.w_qr.Q);
  }
  if (options.use_b_variant && P_r != nullptr) {
    const Matrix Bq = galerkin ? state.B_r : state.w_qr.Q.transpose() * sys.B;
    const Matrix Pq =
        galerkin ? *P_r
                 : Matrix(state.w_qr.R * (*P_r) * state.w_qr.R.transpose());
    H -= Bq * sys.R.llt().solve(Bq.transpose() * Pq);
  }
  std::vector<Complex> ritz = eigenvalues(H);
  double scale = 0.0;
  for (const Complex& t : ritz) scale = std::max(scale, std::abs(t));
  if (scale == 0.0) scale = 1.0;
  // reflect any Ritz value that escaped into the right half-plane
  std::vector<Complex> mirrored;
  for (Complex& t : ritz) {
    t = Complex(-std::max(std::abs(t.real()), 1e-14 * scale), t.imag());
    mirrored.push_back(-t);
  }

  if (state.shifts.empty()) {
    // Galerkin Ritz values of the seed space; an oblique seed projection can
    // put them on the imaginary axis
    const Matrix& Q =
        state.projection == Projection::kGalerkin ? state.W : state.w_qr.Q;
    double mean = 0.0;
    const std::vector<Complex> seed = eigenvalues(Q.transpose() * (sys.A * Q));
    for (const Complex& t : seed) mean += std::abs(t.real());
    return Complex(mean / static_cast<double>(seed.size()), 0.0);
  }

  const auto log_gain = [&](Complex s) {
    double value = 0.0;
    for (const Complex& sigma : state.shifts) value += std::log(std::abs(s - sigma));
    for (const Complex& t : ritz) value -= std::log(std::abs(s - t));
    return value;
  };
  Complex best = mirrored.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (const Complex& s : hull_boundary(mirrored, options.candidate_points)) {
    const double value = log_gain(s);
    if (value > best_value) {
      best_value = value;
      best = s;
    }
  }
  bool repeats = !std::isfinite(best_value);
  for (const Complex& sigma : state.shifts) {
    if (std::abs(best - sigma) <= 1e-12 * std::abs(sigma)) repeats = true;
  }
  if (repeats) best = 2.0 * state.shifts.back();
  if (is_real_shift(best)) best = Complex(best.real(), 0.0);
  if (best.imag() < 0.0) best = std::conj(best);
  return best;
}

void expand_galerkin(KrylovState& state, const StateSpaceSystem& sys,
                     Complex shift) {
  if (state.projection != Projection::kGalerkin) {
    throw InvalidArgument("expand_galerkin: state is not a Galerkin state");
  }
  if (!(shift.real() > 0.0)) {
    throw InvalidArgument("expand_galerkin: shift must have positive real part");
  }
  const Index b = state.block_width;
  const Matrix Z = shifted_solve(transposed(sys.A), shift, state.W.rightCols(b));
  const Matrix fresh = orthogonalize_block(state.W, state.W, Z);
  record_shift(state, shift);
  update_block_width(state, Z.cols(), fresh.cols(), !is_real_shift(shift));
  if (fresh.cols() == 0) return;
  append_columns(state.W, fresh);
  append_columns(state.AtW, sys.A.transpose() * fresh);
  refresh(state, sys);
}

void expand_petrov(KrylovState& state, const StateSpaceSystem& sys,
                   Complex shift) {
  if (state.projection != Projection::kPetrovGalerkin) {
    throw InvalidArgument("expand_petrov: state is not a Petrov-Galerkin state");
  }
  if (!(shift.real() > 0.0)) {
    throw InvalidArgument("expand_petrov: shift must have positive real part");
  }
  const Index b = state.block_width;
  const Index iteration = state.expansions + 1;
  const Matrix Zw = shifted_solve(transposed(sys.A), shift, state.W.rightCols(b));
  const Matrix Zv = shifted_solve(column_major(sys.A), shift, state.V.rightCols(b));
  // W grows along range(V)^⊥ and V along range(W)^⊥
  Matrix Wn = orthogonalize_block(state.W, state.V, Zw);
  Matrix Vn = orthogonalize_block(state.V, state.W, Zv);
  record_shift(state, shift);
  if (Wn.cols() != Vn.cols()) {
    throw BreakdownError("serious breakdown at iteration " +
                             std::to_string(iteration) +
                             ": the two bases deflated differently",
                         static_cast<std::size_t>(iteration));
  }
  update_block_width(state, Zw.cols(), Wn.cols(), !is_real_shift(shift));
  if (Wn.cols() == 0) return;

  const double pivot = biorthonormalize(Wn, Vn);
  if (pivot < kBreakdownTol) {
    throw BreakdownError("serious breakdown at iteration " +
                             std::to_string(iteration) +
                             ": new basis pair is orthogonal",
                         static_cast<std::size_t>(iteration));
  }
  if (pivot < kNearBreakdownTol) {
    state.warnings.push_back("near breakdown at iteration " +
                             std::to_string(iteration) + ": pivot " +
                             std::to_string(pivot));
  }
  const QrAppendResult grown = qr_append(state.w_qr, Wn);
  if (grown.rank_deficient()) {
    throw BreakdownError("serious breakdown at iteration " +
                             std::to_string(iteration) +
                             ": left basis lost rank",
                         static_cast<std::size_t>(iteration));
  }
  state.w_qr = grown.factors;
  append_columns(state.W, Wn);
  append_columns(state.V, Vn);
  append_columns(state.AtW, sys.A.transpose() * Wn);

  const Index k = state.W.cols();
  const double defect =
      (state.W.transpose() * state.V - Matrix::Identity(k, k)).norm();
  if (!(defect <= kBiorthogonalityTol)) {
    throw BreakdownError("loss of biorthogonality at iteration " +
                             std::to_string(iteration) + ": |W'V - I| = " +
                             std::to_string(defect),
                         static_cast<std::size_t>(iteration));
  }
  refresh(state, sys);
}

double galerkin_residual_norm(const Matrix& P_r, const Matrix& a_r) {
  if (P_r.cols() != a_r.rows()) {
    throw InvalidArgument("galerkin_residual_norm: dimension mismatch");
  }
  return std::sqrt(2.0) * (P_r * a_r).norm();
}

double pg_residual_norm(const Matrix& P_r, const Matrix& a_r,
                        const Matrix& R_W) {
  const Index k = P_r.rows();
  const Index b = a_r.cols();
  if (P_r.cols() != k || a_r.rows() != k || R_W.cols() != k + b) {
    throw InvalidArgument(
        "pg_residual_norm: R_W does not match [W, w_hat] (stale factor)");
  }
  Matrix core = Matrix::Zero(k + b, k + b);
  const Matrix Pa = P_r * a_r;
  core.topRightCorner(k, b) = Pa;
  core.bottomLeftCorner(b, k) = Pa.transpose();
  return (R_W * core * R_W.transpose()).norm();
}

ReducedModel reduced_model(const KrylovState& state) {
  ReducedModel red;
  red.W = state.W;
  red.V = state.projection == Projection::kGalerkin ? state.W : state.V;
  red.A_r = state.A_r;
  red.B_r = state.B_r;
  red.C_r = state.C_r;
  return red;
}

namespace {

// The PG projected ARE is solved in the orthonormal coordinates of range(W)
// (W = Q R, P_Q = R P_r Rᵀ), where its residual is measured at the scale of
// the full residual, and mapped back to P_r.
Matrix solve_projected_are(const KrylovState& state, const StateSpaceSystem& sys) {
  if (state.projection == Projection::kGalerkin) {
    return solve_dense_are(state.A_r, state.B_r, state.C_r, sys.R);
  }
  const Matrix& Q = state.w_qr.Q;
  const Matrix& R = state.w_qr.R;
  const Matrix A_q = Q.transpose() * (sys.A * state.V) * R.transpose();
  const Matrix B_q = Q.transpose() * sys.B;
  const Matrix C_q = state.C_r * R.transpose();
  const Matrix P_q = solve_dense_are(A_q, B_q, C_q, sys.R);
  const auto upper = R.triangularView<Eigen::Upper>();
  const Matrix half = upper.solve(P_q);
  const Matrix P_r = upper.solve(half.transpose()).transpose();
  return 0.5 * (P_r + P_r.transpose());
}

KrylovResult run_adaptive(const StateSpaceSystem& sys,
                          const KrylovOptions& options,
                          const IterationHook& hook, Projection projection) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  double hook_seconds = 0.0;
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count() -
           hook_seconds;
  };

  if (!(options.tol > 0.0)) throw InvalidArgument("tol must be positive");
  if (options.r_max < 1) throw InvalidArgument("r_max must be positive");
  const double c_norm2 = sys.C.squaredNorm();
  if (c_norm2 == 0.0) throw InvalidArgument("C is zero");
  const bool galerkin = projection == Projection::kGalerkin;
  const Index max_columns = options.r_max * sys.p();

  ConvergenceHistory history;
  KrylovState state;
  try {
    state = galerkin ? start_galerkin(sys) : start_petrov(sys);
  } catch (const BreakdownError& e) {
    throw KrylovError(KrylovFailure::kBreakdown, e.what(), 0, history);
  }
  std::size_t warnings_seen = 0;
  Index ill_posed_streak = 0;

  for (Index iteration = 0;; ++iteration) {
    for (; warnings_seen < state.warnings.size(); ++warnings_seen) {
      history.events.push_back(state.warnings[warnings_seen]);
    }
    Matrix P_r;
    bool solved = true;
    try {
      P_r = solve_projected_are(state, sys);
    } catch (const Error& e) {
      const std::string what =
          (galerkin ? std::string("reduced ARE solve failed at r = ")
                    : std::string("PG projected ARE ill-posed at r = ")) +
          std::to_string(state.dimension()) + ": " + e.what();
      history.events.push_back(what);
      if (galerkin || ++ill_posed_streak > options.max_ill_posed_streak) {
        throw KrylovError(KrylovFailure::kReducedAreFailed, what, iteration,
                          history);
      }
      solved = false;
    }
    if (solved) {
      ill_posed_streak = 0;
      const double residual =
          galerkin ? galerkin_residual_norm(P_r, state.a_r)
                   : pg_residual_norm(P_r, state.a_r, state.R_W);
      const double relative = residual / c_norm2;

      IterationRecord record;
      record.r = state.dimension();
      record.residual = relative;
      record.elapsed_s = elapsed();
      if (hook) {
        const auto t0 = Clock::now();
        hook(state, reduced_model(state), P_r, record);
        hook_seconds += std::chrono::duration<double>(Clock::now() - t0).count();
      }
      if (!history.empty() && relative > history.back().residual) {
        history.events.push_back("residual increased at r = " +
                                 std::to_string(record.r));
      }
      history.add(record);

      if (relative <= options.tol) {
        KrylovResult result;
        result.solution = {P_r, residual, relative};
        result.model = reduced_model(state);
        result.history = std::move(history);
        result.shifts = state.shifts;
        return result;
      }
    }
    if (state.exhausted) {
      throw KrylovError(KrylovFailure::kNotConverged,
                        "not converged: the space stopped growing at r = " +
                            std::to_string(state.dimension()),
                        iteration, history);
    }
    if (options.time_limit_s && elapsed() > *options.time_limit_s) {
      throw KrylovError(KrylovFailure::kTimeLimit,
                        "time limit exceeded at r = " +
                            std::to_string(state.dimension()),
                        iteration, history);
    }

    const Complex shift =
        next_shift(state, sys, options.shifts, solved ? &P_r : nullptr);
    const Index added =
        state.block_width * (std::abs(shift.imag()) > 0.0 ? 2 : 1);
    if (state.dimension() + added > max_columns) {
      throw KrylovError(KrylovFailure::kNotConverged,
                        "not converged: r_max reached at r = " +
                            std::to_string(state.dimension()),
                        iteration, history);
    }
    try {
      if (galerkin) {
        expand_galerkin(state, sys, shift);
      } else {
        expand_petrov(state, sys, shift);
      }
    } catch (const BreakdownError& e) {
      history.events.push_back(e.what());
      throw KrylovError(KrylovFailure::kBreakdown, e.what(), iteration + 1,
                        history);
    } catch (const SingularShiftError& e) {
      history.events.push_back(e.what());
      throw KrylovError(KrylovFailure::kNotConverged, e.what(), iteration + 1,
                        history);
    }
  }
}

}  // namespace

KrylovResult gark(const StateSpaceSystem& sys, const KrylovOptions& options,
                  const IterationHook& hook) {
  return run_adaptive(sys, options, hook, Projection::kGalerkin);
}

KrylovResult pgark(const StateSpaceSystem& sys, const KrylovOptions& options,
                   const IterationHook& hook) {
  return run_adaptive(sys, options, hook, Projection::kPetrovGalerkin);
}

}  // namespace aremor
