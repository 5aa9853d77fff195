#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "mlat/error.hpp"
#include "mlat/numkernel.hpp"

namespace mlat {

/// Satellite positions a_1..a_m in R^n (one per row) and arrival times
/// t_1..t_m. Signal speed is 1, so times and lengths share a unit.
struct Scenario {
  Matrix satellites;
  Vector times;

  std::size_t dimension() const { return static_cast<std::size_t>(satellites.cols()); }
  std::size_t count() const { return static_cast<std::size_t>(satellites.rows()); }
};

/// User position x and emission time / clock bias t.
struct GroundTruth {
  Vector user;
  double bias = 0.0;
};

/// A candidate (t', x') with its worst violation of |a_i - x'| = t_i - t'.
struct Solution {
  double bias = 0.0;
  Vector user;
  double residual = 0.0;
};

/// Relative threshold under which two satellites count as the same point.
inline constexpr double kDistinctRel = 1e-12;

/// Diameter of the axis-aligned bounding box of the satellites.
inline double length_scale(const Matrix& satellites) {
  if (satellites.rows() == 0) return 0.0;
  const Vector extent = satellites.colwise().maxCoeff() - satellites.colwise().minCoeff();
  return extent.norm();
}

/// Similarity frame mapping satellites to unit diameter about their centroid.
/// Rank and classification decisions are taken in this frame so that they do
/// not depend on units or on where the origin sits.
struct Frame {
  Vector center;
  double scale = 1.0;

  static Frame of(const Matrix& satellites) {
    Frame f;
    f.center = satellites.colwise().mean().transpose();
    f.scale = length_scale(satellites);
    if (!(f.scale > 0.0)) f.scale = 1.0;
    return f;
  }

  Vector to_local(const Vector& p) const { return (p - center) / scale; }
  Vector to_global(const Vector& p) const { return center + scale * p; }
  Matrix to_local_rows(const Matrix& rows) const {
    return (rows.rowwise() - center.transpose()) / scale;
  }
};

/// B from the linearized system: row i = (2 a_i^T, -1).
inline Matrix assemble_B(const Matrix& satellites) {
  const Eigen::Index m = satellites.rows();
  const Eigen::Index n = satellites.cols();
  Matrix b(m, n + 1);
  b.leftCols(n) = 2.0 * satellites;
  b.col(n).setConstant(-1.0);
  return b;
}

/// Checks the satellite-only invariants: n >= 2, m >= n+1, finite, pairwise
/// distinct, not on a common affine hyperplane.
inline void check_satellites(const Matrix& satellites, const Tolerance& tol = {}) {
  tol.check();
  const Eigen::Index m = satellites.rows();
  const Eigen::Index n = satellites.cols();
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension must be at least 2");
  if (!all_finite(satellites)) throw Error(ErrorCode::InvalidInput, "non-finite coordinate");
  if (m < n + 1) {
    throw Error(ErrorCode::TooFewSatellites, "need at least " + std::to_string(n + 1) +
                                                 " satellites, got " + std::to_string(m));
  }
  const double scale = length_scale(satellites);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (!((satellites.row(i) - satellites.row(j)).norm() > kDistinctRel * scale)) {
        throw Error(ErrorCode::DuplicateSatellites,
                    "satellites " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
      }
    }
  }
  const Frame frame = Frame::of(satellites);
  if (rank_of(assemble_B(frame.to_local_rows(satellites)), tol) < static_cast<std::size_t>(n + 1)) {
    throw Error(ErrorCode::CoplanarSatellites, "satellites lie on a common affine hyperplane");
  }
}

inline Scenario validate(Scenario s, const Tolerance& tol = {}) {
  if (s.times.size() != s.satellites.rows()) {
    throw Error(ErrorCode::InvalidInput, "times and satellites differ in length");
  }
  if (!s.times.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite time");
  check_satellites(s.satellites, tol);
  return s;
}

/// Exact forward model t_i = |a_i - x| + t.
inline Scenario synthesize_times(const Matrix& satellites, const GroundTruth& truth,
                                 const Tolerance& tol = {}) {
  if (truth.user.size() != satellites.cols()) {
    throw Error(ErrorCode::InvalidInput, "user dimension does not match satellites");
  }
  if (!truth.user.allFinite() || !std::isfinite(truth.bias)) {
    throw Error(ErrorCode::InvalidInput, "non-finite ground truth");
  }
  check_satellites(satellites, tol);
  Scenario s{satellites, Vector(satellites.rows())};
  for (Eigen::Index i = 0; i < satellites.rows(); ++i) {
    s.times(i) = (satellites.row(i).transpose() - truth.user).norm() + truth.bias;
  }
  return s;
}

/// max_i | |a_i - x'| - (t_i - t') |
inline double residual_of(const Scenario& s, double bias, const Vector& user) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.satellites.rows(); ++i) {
    const double d = (s.satellites.row(i).transpose() - user).norm();
    worst = std::max(worst, std::abs(d - (s.times(i) - bias)));
  }
  return worst;
}

/// Same as residual_of but against |t_i - t'| (sign of the time difference ignored).
inline double absolute_residual_of(const Scenario& s, double bias, const Vector& user) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < s.satellites.rows(); ++i) {
    const double d = (s.satellites.row(i).transpose() - user).norm();
    worst = std::max(worst, std::abs(d - std::abs(s.times(i) - bias)));
  }
  return worst;
}

}  // namespace mlat
