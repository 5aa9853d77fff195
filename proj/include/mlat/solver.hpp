#pragma once

// Exact solver for |a_i - x| = t_i - t. The linear system A y = c with
// y = (t, x, |x|^2 - t^2) is solved directly when A has full column rank;
// otherwise x is affine in t (x = t u + v) and t solves a scalar quadratic.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mlat/error.hpp"
#include "mlat/model.hpp"
#include "mlat/numkernel.hpp"

namespace mlat {

/// A: row i = (-2 t_i, 2 a_i^T, -1).
inline Matrix assemble_A(const Scenario& s) {
  const Eigen::Index m = s.satellites.rows();
  const Eigen::Index n = s.satellites.cols();
  Matrix a(m, n + 2);
  a.col(0) = -2.0 * s.times;
  a.middleCols(1, n) = 2.0 * s.satellites;
  a.col(n + 1).setConstant(-1.0);
  return a;
}

inline Matrix assemble_B(const Scenario& s) { return assemble_B(s.satellites); }

/// Right-hand side c_i = |a_i|^2 - t_i^2.
inline Vector range_rhs(const Scenario& s) {
  return s.satellites.rowwise().squaredNorm() - s.times.cwiseAbs2();
}

/// x = t u + v and |x|^2 - t^2 = 2 alpha t + beta along the solution line.
struct Reduction {
  Vector u;
  Vector v;
  double alpha = 0.0;
  double beta = 0.0;
};

inline Reduction reduce_with(const Matrix& b_pinv, const Scenario& s) {
  const Eigen::Index n = s.satellites.cols();
  const Vector ua = 2.0 * (b_pinv * s.times);
  const Vector vb = b_pinv * range_rhs(s);
  return Reduction{ua.head(n), vb.head(n), 0.5 * ua(n), vb(n)};
}

/// (u, 2 alpha) = 2 B^+ t and (v, beta) = B^+ c, in the scenario's own coordinates.
inline Reduction reduce(const Scenario& s, const Tolerance& tol = {}) {
  Matrix b_pinv;
  try {
    b_pinv = pseudo_inverse(assemble_B(s.satellites), tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ColumnRankDeficient) throw;
    throw Error(ErrorCode::CoplanarSatellites, "B lacks full column rank");
  }
  return reduce_with(b_pinv, s);
}

/// Coefficients of c2 t^2 + c1 t + c0 = 0.
struct QuadCoeffs {
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;
};

inline QuadCoeffs quadratic_of(const Reduction& r) {
  return QuadCoeffs{r.u.squaredNorm() - 1.0, 2.0 * (r.u.dot(r.v) - r.alpha),
                    r.v.squaredNorm() - r.beta};
}

enum class Branch { FullRank, RankDeficient };

struct SolveReport {
  Branch branch = Branch::FullRank;
  std::size_t rank_A = 0;
  /// Present iff branch == RankDeficient; expressed in input coordinates.
  std::optional<Reduction> reduction;
  std::optional<QuadCoeffs> quad_coeffs;
  /// The same quadratic in the normalized frame (unit satellite diameter,
  /// times shifted so that min t_i = 0); decisions are taken on these.
  std::optional<QuadCoeffs> normalized_coeffs;
  /// Normalized discriminant; present iff the quadratic is not treated as linear.
  std::optional<double> discriminant;
  std::vector<Solution> solutions;
  /// Roots that satisfy |a_i - x'| = |t_i - t'| but violate t' <= t_i.
  std::vector<Solution> rejected;
};

namespace detail {

inline constexpr double kResidualRel = 1e-8;
inline constexpr double kInequalityRel = 1e-9;

/// Residual threshold for a candidate: relative to the satellite diameter or
/// to the candidate's own distances, whichever is larger.
inline double residual_tolerance(const Scenario& s, const Vector& user, double scale) {
  double reach = scale;
  for (Eigen::Index i = 0; i < s.satellites.rows(); ++i) {
    reach = std::max(reach, (s.satellites.row(i).transpose() - user).norm());
  }
  return kResidualRel * reach;
}

/// Maps a reduction computed in the normalized frame (satellites (a - c)/s,
/// times (t - t0)/s) back to input coordinates.
inline Reduction to_global(const Reduction& local, const Frame& f, double t0) {
  const double s = f.scale;
  const Vector& c = f.center;
  Reduction r;
  r.u = local.u;
  r.alpha = c.dot(local.u) + s * local.alpha - t0;
  r.v = c - t0 * local.u + s * local.v;
  r.beta = c.squaredNorm() - t0 * t0 + 2.0 * s * c.dot(local.v) + s * s * local.beta -
           2.0 * r.alpha * t0;
  return r;
}

}  // namespace detail

/// Real roots of the reduced quadratic in the normalized frame. Leading
/// coefficient is treated as zero when |u| is within class_abs of 1 so the
/// paraboloid decision matches quadric classification.
struct QuadraticRoots {
  std::vector<double> roots;
  std::optional<double> discriminant;
};

inline QuadraticRoots solve_reduced_quadratic(const QuadCoeffs& q, double u_norm,
                                              const Tolerance& tol) {
  if (std::max(std::abs(q.c2), std::abs(q.c1)) <= tol.class_abs) {
    throw Error(ErrorCode::DegenerateQuadratic, "coefficients of t^2 and t both vanish");
  }
  QuadraticRoots out;
  if (std::abs(u_norm - 1.0) <= tol.class_abs) {
    if (std::abs(q.c1) <= tol.class_abs) {
      throw Error(ErrorCode::DegenerateQuadratic, "linear coefficient vanishes at |u| = 1");
    }
    out.roots.push_back(-q.c0 / q.c1);
    return out;
  }
  double disc = q.c1 * q.c1 - 4.0 * q.c2 * q.c0;
  out.discriminant = disc;
  if (disc < -tol.double_root) return out;
  // disc = 4 l^2 in the normalized frame; the cone case.
  if (disc <= tol.double_root) {
    out.roots.push_back(-q.c1 / (2.0 * q.c2));
    return out;
  }
  const double root_disc = std::sqrt(disc);
  const double q_stable = -0.5 * (q.c1 + std::copysign(root_disc, q.c1));
  out.roots.push_back(q_stable / q.c2);
  if (q_stable != 0.0) out.roots.push_back(q.c0 / q_stable);
  std::sort(out.roots.begin(), out.roots.end(), std::greater<>());
  return out;
}

inline SolveReport solve(const Scenario& input, const Tolerance& tol = {}) {
  const Scenario s = validate(input, tol);
  const Eigen::Index n = s.satellites.cols();
  const Frame frame = Frame::of(s.satellites);
  const double t0 = s.times.minCoeff();

  Scenario local{frame.to_local_rows(s.satellites),
                 (s.times.array() - t0).matrix() / frame.scale};

  SolveReport report;
  const Matrix a_local = assemble_A(local);
  report.rank_A = rank_of(a_local, tol);

  if (report.rank_A == static_cast<std::size_t>(n + 2)) {
    const Vector y = pseudo_inverse(a_local, tol) * range_rhs(local);
    Solution sol;
    sol.bias = t0 + frame.scale * y(0);
    sol.user = frame.to_global(y.segment(1, n));
    sol.residual = residual_of(s, sol.bias, sol.user);
    if (sol.residual <= detail::residual_tolerance(s, sol.user, frame.scale)) {
      report.branch = Branch::FullRank;
      report.solutions.push_back(std::move(sol));
      return report;
    }
    // Numerically full rank but the linear solution does not fit: the
    // configuration sits near the rank boundary, use the quadratic route.
  }

  report.branch = Branch::RankDeficient;
  const Matrix b_pinv = pseudo_inverse(assemble_B(local.satellites), tol);
  const Reduction red_local = reduce_with(b_pinv, local);
  const QuadCoeffs q_local = quadratic_of(red_local);
  report.normalized_coeffs = q_local;
  report.reduction = detail::to_global(red_local, frame, t0);
  report.quad_coeffs = quadratic_of(*report.reduction);

  const QuadraticRoots roots = solve_reduced_quadratic(q_local, red_local.u.norm(), tol);
  report.discriminant = roots.discriminant;

  const double time_span = std::max(frame.scale, s.times.maxCoeff() - t0);
  const double slack = detail::kInequalityRel * time_span;
  for (double root : roots.roots) {
    Solution cand;
    cand.bias = t0 + frame.scale * root;
    cand.user = frame.to_global(root * red_local.u + red_local.v);
    const double limit = detail::residual_tolerance(s, cand.user, frame.scale);
    if (absolute_residual_of(s, cand.bias, cand.user) > limit) continue;
    cand.residual = residual_of(s, cand.bias, cand.user);
    if (cand.bias <= t0 + slack) {
      report.solutions.push_back(std::move(cand));
    } else {
      report.rejected.push_back(std::move(cand));
    }
  }
  if (report.solutions.empty()) {
    throw Error(ErrorCode::NoSolution, "no root of the reduced quadratic satisfies the equations");
  }
  return report;
}

}  // namespace mlat
