#pragma once

// Small dense linear algebra with explicit tolerances. All rank decisions in
// the library go through rank_of so that they share one cutoff rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mlat/error.hpp"

namespace mlat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct Tolerance {
  /// Singular values at or below rank_rel * sigma_max count as zero.
  double rank_rel = 1e-9;
  /// Absolute threshold for classification decisions on scale-normalized
  /// quantities (eccentricity, semilatus / scale, discriminants).
  double class_abs = 1e-9;
  /// Normalized discriminants with magnitude at or below this give a double
  /// root.
  double double_root = 1e-12;

  /// Scale-normalized semilatus |l| at or below this counts as zero (cone).
  /// The discriminant of the reduced quadratic is 4 l^2, so this is the same
  /// decision as |discriminant| <= double_root.
  double flat_semilatus() const { return 0.5 * std::sqrt(double_root); }

  void check() const {
    auto ok = [](double v) { return v > 0.0 && v < 1.0; };
    if (!ok(rank_rel) || !ok(class_abs) || !ok(double_root)) {
      throw Error(ErrorCode::InvalidInput, "tolerances must lie in (0, 1)");
    }
  }
};

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

/// Singular values in descending order.
inline Vector singular_values(const Matrix& m) {
  if (m.size() == 0) throw Error(ErrorCode::InvalidInput, "empty matrix");
  return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

inline std::size_t rank_from_singular_values(const Vector& sv, const Tolerance& tol) {
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  const double cutoff = tol.rank_rel * sv(0);
  return static_cast<std::size_t>((sv.array() > cutoff).count());
}

inline std::size_t rank_of(const Matrix& m, const Tolerance& tol = {}) {
  return rank_from_singular_values(singular_values(m), tol);
}

/// Left inverse of a matrix with full column rank, computed from the SVD.
inline Matrix pseudo_inverse(const Matrix& m, const Tolerance& tol = {}) {
  if (m.size() == 0) throw Error(ErrorCode::InvalidInput, "empty matrix");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sv = svd.singularValues();
  if (rank_from_singular_values(sv, tol) < static_cast<std::size_t>(m.cols())) {
    throw Error(ErrorCode::ColumnRankDeficient,
                "matrix of " + std::to_string(m.cols()) + " columns lacks full column rank");
  }
  return svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

/// Orthonormal basis of the right nullspace (possibly empty).
inline std::vector<Vector> nullspace(const Matrix& m, const Tolerance& tol = {}) {
  if (m.size() == 0) throw Error(ErrorCode::InvalidInput, "empty matrix");
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const std::size_t rank = rank_from_singular_values(svd.singularValues(), tol);
  std::vector<Vector> basis;
  for (Eigen::Index j = static_cast<Eigen::Index>(rank); j < m.cols(); ++j) {
    basis.emplace_back(svd.matrixV().col(j));
  }
  return basis;
}

struct SymEigen {
  Vector values;   // descending
  Matrix vectors;  // column k belongs to values(k)
};

inline SymEigen sym_eigen(const Matrix& s, const Tolerance& tol = {}) {
  if (s.rows() != s.cols() || s.size() == 0) {
    throw Error(ErrorCode::NotSymmetric, "matrix is not square");
  }
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol.class_abs * scale) {
    throw Error(ErrorCode::NotSymmetric, "asymmetry exceeds class tolerance");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (s + s.transpose()));
  const Eigen::Index n = s.rows();
  SymEigen out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(n - 1 - k);
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

}  // namespace mlat
