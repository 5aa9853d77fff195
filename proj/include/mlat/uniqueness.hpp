#pragma once

// Uniqueness of the positioning problem for a fixed user position, explicit
// certificates valid for every user position, the determinant-product test,
// and a generator of configurations with two solutions.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlat/error.hpp"
#include "mlat/model.hpp"
#include "mlat/numkernel.hpp"
#include "mlat/quadric.hpp"
#include "mlat/random.hpp"
#include "mlat/solver.hpp"

namespace mlat {

enum class CaseLabel { FullRank, Spheroid, Sphere, Hyperboloid, Cone, Paraboloid };

inline std::string_view to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::FullRank: return "FULLRANK";
    case CaseLabel::Spheroid: return "SPHEROID";
    case CaseLabel::Sphere: return "SPHERE";
    case CaseLabel::Hyperboloid: return "HYPERBOLOID";
    case CaseLabel::Cone: return "CONE";
    case CaseLabel::Paraboloid: return "PARABOLOID";
  }
  return "UNKNOWN";
}

inline CaseLabel case_label_of(QuadricClass k) {
  switch (k) {
    case QuadricClass::Sphere: return CaseLabel::Sphere;
    case QuadricClass::ProlateSpheroid: return CaseLabel::Spheroid;
    case QuadricClass::TwoSheetHyperboloid: return CaseLabel::Hyperboloid;
    case QuadricClass::Cone: return CaseLabel::Cone;
    case QuadricClass::Paraboloid: return CaseLabel::Paraboloid;
  }
  return CaseLabel::FullRank;
}

struct UniquenessReport {
  bool unique = true;
  std::size_t rank_A = 0;
  CaseLabel case_label = CaseLabel::FullRank;
  /// Present unless case_label is FullRank; F is the user position.
  std::optional<FocalQuadric> quadric;
  /// The second solution (bias relative to a true bias of 0); hyperboloids only.
  std::optional<Solution> alternate;
  /// max_i |<u, a_i> - alpha - |a_i - x||, normalized by the satellite diameter.
  double reduction_residual = 0.0;
};

/// Precomputes everything about a satellite set that does not depend on the
/// user position, so that many positions can be classified cheaply.
class UniquenessClassifier {
 public:
  static constexpr double kReductionResidual = 1e-6;

  explicit UniquenessClassifier(const Matrix& satellites, const Tolerance& tol = {})
      : satellites_(satellites), tol_(tol) {
    check_satellites(satellites_, tol_);
    frame_ = Frame::of(satellites_);
    local_ = frame_.to_local_rows(satellites_);
    b_pinv_ = pseudo_inverse(assemble_B(local_), tol_);
  }

  const Matrix& satellites() const { return satellites_; }
  const Frame& frame() const { return frame_; }

  UniquenessReport classify(const Vector& user) const {
    const Eigen::Index m = local_.rows();
    const Eigen::Index n = local_.cols();
    if (user.size() != n) throw Error(ErrorCode::InvalidInput, "user dimension mismatch");
    if (!user.allFinite()) throw Error(ErrorCode::InvalidInput, "non-finite user position");

    // Work with times shifted so the earliest arrival is 0, as solve does.
    const Vector xh = frame_.to_local(user);
    Vector times(m);
    for (Eigen::Index i = 0; i < m; ++i) times(i) = (local_.row(i).transpose() - xh).norm();
    const double d0 = times.minCoeff();
    times.array() -= d0;

    UniquenessReport report;
    if (m >= n + 2) {
      report.rank_A = rank_of(assemble_A(Scenario{local_, times}), tol_);
      if (report.rank_A == static_cast<std::size_t>(n + 2)) return report;
    } else {
      report.rank_A = static_cast<std::size_t>(n + 1);
    }

    const Vector ua = 2.0 * (b_pinv_ * times);
    const Vector u = ua.head(n);
    const double alpha_hat = 0.5 * ua(n);
    report.reduction_residual = ((local_ * u).array() - alpha_hat - times.array()).abs().maxCoeff();
    const double e = u.norm();
    if (report.reduction_residual > kReductionResidual * (1.0 + e)) {
      throw Error(ErrorCode::InconsistentReduction,
                  "rank deficient but the focal identity fails by " +
                      std::to_string(report.reduction_residual));
    }

    const double alpha = u.dot(frame_.center) + frame_.scale * (alpha_hat - d0);
    report.quadric = classify_focal(u, alpha, user, tol_, frame_.scale);
    report.case_label = case_label_of(report.quadric->kind);
    if (report.case_label == CaseLabel::Hyperboloid) {
      report.unique = false;
      const SecondFocus other = *second_focus(*report.quadric);
      Solution alt;
      alt.bias = other.shift;
      alt.user = other.focus;
      Scenario s{satellites_, Vector(m)};
      for (Eigen::Index i = 0; i < m; ++i) {
        s.times(i) = (satellites_.row(i).transpose() - user).norm();
      }
      alt.residual = residual_of(s, alt.bias, alt.user);
      report.alternate = std::move(alt);
    }
    return report;
  }

 private:
  Matrix satellites_;
  Tolerance tol_;
  Frame frame_;
  Matrix local_;
  Matrix b_pinv_;
};

inline UniquenessReport classify_uniqueness(const Matrix& satellites, const Vector& user,
                                            const Tolerance& tol = {}) {
  return UniquenessClassifier(satellites, tol).classify(user);
}

// ---------------------------------------------------------------------------
// Certificates

/// One row of degree-<=2 monomials per satellite.
inline Matrix build_moment_matrix(const Matrix& satellites) {
  const std::size_t n = static_cast<std::size_t>(satellites.cols());
  Matrix mm(satellites.rows(), static_cast<Eigen::Index>(monomial_count(n)));
  for (Eigen::Index i = 0; i < satellites.rows(); ++i) {
    mm.row(i) = monomials(satellites.row(i).transpose()).transpose();
  }
  return mm;
}

enum class CertificateKind {
  /// No quadric contains all satellites: unique for every user position.
  NoContainingQuadric,
  /// Exactly one quadric contains them and it is not a hyperboloid of
  /// revolution with all satellites on one sheet: unique for every position.
  SingleQuadricNotHyperboloid,
  Inconclusive,
};

inline std::string_view to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::NoContainingQuadric: return "NO_CONTAINING_QUADRIC";
    case CertificateKind::SingleQuadricNotHyperboloid: return "SINGLE_QUADRIC_NOT_HYPERBOLOID";
    case CertificateKind::Inconclusive: return "INCONCLUSIVE";
  }
  return "UNKNOWN";
}

struct Certificate {
  CertificateKind kind = CertificateKind::Inconclusive;
  std::size_t moment_rank = 0;
  std::size_t monomials = 0;
  std::string detail;
  /// Coefficients of the unique containing quadric in input coordinates,
  /// scaled to unit max-norm; present when moment_rank = monomials - 1.
  std::optional<Vector> quadric_coefficients;
  /// Focal forms of that quadric, in input coordinates.
  std::vector<FocalQuadric> candidates;

  bool certified() const { return kind != CertificateKind::Inconclusive; }
};

namespace detail {

/// Coefficients c of a quadric in local coordinates P_hat = (P - center) / s,
/// rewritten for the original coordinates P.
inline Vector coefficients_to_global(const Vector& local, const Frame& f) {
  const std::size_t n = static_cast<std::size_t>(f.center.size());
  const Eigen::Index N = static_cast<Eigen::Index>(n);
  Matrix s(N, N);
  Vector lin(N);
  for (std::size_t j = 0; j < n; ++j) {
    lin(j) = local(linear_index(j));
    s(j, j) = local(square_index(n, j));
    for (std::size_t k = j + 1; k < n; ++k) s(j, k) = s(k, j) = 0.5 * local(cross_index(n, j, k));
  }
  // q(P) = (P-c)^T S (P-c) / s^2 + lin^T (P-c) / s + c0
  const double sc = f.scale;
  const Matrix s2 = s / (sc * sc);
  const Vector l2 = lin / sc - 2.0 * s2 * f.center;
  const double c0 = local(0) + f.center.dot(s2 * f.center) - lin.dot(f.center) / sc;
  Vector out(local.size());
  out(0) = c0;
  for (std::size_t j = 0; j < n; ++j) {
    out(linear_index(j)) = l2(j);
    out(square_index(n, j)) = s2(j, j);
    for (std::size_t k = j + 1; k < n; ++k) out(cross_index(n, j, k)) = 2.0 * s2(j, k);
  }
  return out / out.cwiseAbs().maxCoeff();
}

}  // namespace detail

inline Certificate certify_uniqueness(const Matrix& satellites, const Tolerance& tol = {}) {
  check_satellites(satellites, tol);
  const std::size_t n = static_cast<std::size_t>(satellites.cols());
  const Frame frame = Frame::of(satellites);
  const Matrix local = frame.to_local_rows(satellites);
  const Matrix mm = build_moment_matrix(local);

  Certificate cert;
  cert.monomials = monomial_count(n);
  cert.moment_rank = rank_of(mm, tol);

  if (cert.moment_rank == cert.monomials) {
    cert.kind = CertificateKind::NoContainingQuadric;
    cert.detail = "moment matrix has full column rank";
    return cert;
  }
  if (cert.moment_rank + 1 < cert.monomials) {
    cert.detail = "several independent quadrics contain the satellites";
    return cert;
  }

  const std::vector<Vector> kernel = nullspace(mm, tol);
  const Vector& coeffs = kernel.front();
  cert.quadric_coefficients = detail::coefficients_to_global(coeffs, frame);

  const std::vector<FocalQuadric> local_candidates = recover_focal_parameters(coeffs, n, tol);
  bool offending = false;
  for (const FocalQuadric& q : local_candidates) {
    if (q.kind == QuadricClass::TwoSheetHyperboloid) {
      bool all_pos = true;
      bool all_neg = true;
      for (Eigen::Index i = 0; i < local.rows(); ++i) {
        const double side = q.directrix_value(local.row(i).transpose());
        all_pos = all_pos && side >= -tol.class_abs;
        all_neg = all_neg && side <= tol.class_abs;
      }
      offending = offending || all_pos || all_neg;
    }
    const double alpha = q.scaled_normal.dot(frame.center) + frame.scale * q.offset;
    cert.candidates.push_back(classify_focal(q.scaled_normal, alpha,
                                             frame.to_global(q.focus), tol, frame.scale));
  }

  if (offending) {
    cert.detail = "the containing quadric is a hyperboloid of revolution with all satellites on one sheet";
  } else {
    cert.kind = CertificateKind::SingleQuadricNotHyperboloid;
    cert.detail = local_candidates.empty()
                      ? "the containing quadric has no focus"
                      : "the containing quadric is not a one-sheet hyperboloid configuration";
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Determinant product

/// Product over sign vectors (eps_2..eps_{n+2}) of det[(eps_i |a_i - x|, a_i^T, 1)]
/// with eps_1 = +1. Held as sign and log-magnitude to avoid overflow.
struct DeterminantProduct {
  int sign = 0;
  double log_abs = -std::numeric_limits<double>::infinity();
  /// Smallest |det| / (product of row norms) over all factors, evaluated in
  /// the normalized frame; lies in [0, 1].
  double min_relative_factor = 0.0;
  std::size_t factors = 0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
  bool is_zero(double tau = 1e-9) const { return min_relative_factor <= tau; }
};

inline DeterminantProduct determinant_product(const Matrix& satellites, const Vector& user) {
  const Eigen::Index n = satellites.cols();
  if (satellites.rows() != n + 2) {
    throw Error(ErrorCode::WrongSatelliteCount,
                "need exactly " + std::to_string(n + 2) + " satellites");
  }
  if (user.size() != n) throw Error(ErrorCode::InvalidInput, "user dimension mismatch");
  if (!satellites.allFinite() || !user.allFinite()) {
    throw Error(ErrorCode::InvalidInput, "non-finite input");
  }
  const Frame frame = Frame::of(satellites);
  const Matrix local = frame.to_local_rows(satellites);
  const Vector xh = frame.to_local(user);
  const Eigen::Index k = n + 2;

  Matrix base(k, k);
  Vector dist(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    dist(i) = (local.row(i).transpose() - xh).norm();
    base(i, 0) = dist(i);
    base.row(i).segment(1, n) = local.row(i);
    base(i, k - 1) = 1.0;
  }

  DeterminantProduct out;
  out.sign = 1;
  out.log_abs = 0.0;
  out.min_relative_factor = 1.0;
  const std::uint64_t patterns = std::uint64_t{1} << (k - 1);
  out.factors = static_cast<std::size_t>(patterns);
  Matrix work = base;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    for (Eigen::Index i = 1; i < k; ++i) {
      work(i, 0) = ((mask >> (i - 1)) & 1U) ? -dist(i) : dist(i);
    }
    const double det = work.partialPivLu().determinant();
    const double hadamard = work.rowwise().norm().prod();
    out.min_relative_factor = std::min(out.min_relative_factor, std::abs(det) / hadamard);
    if (det == 0.0) {
      out.sign = 0;
      out.log_abs = -std::numeric_limits<double>::infinity();
    } else if (out.sign != 0) {
      if (det < 0.0) out.sign = -out.sign;
      out.log_abs += std::log(std::abs(det));
    }
  }
  // Undo the normalization: each factor scales by s^(n+1).
  if (out.sign != 0) {
    out.log_abs += static_cast<double>(patterns) * static_cast<double>(n + 1) *
                   std::log(frame.scale);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Witness configurations

/// Satellites on the sheet x_1 > 0 of x_1^2 - x_2^2 - ... - x_n^2 = 1 with the
/// user at its focus (sqrt 2, 0, ..., 0). Every such configuration has exactly
/// two solutions; the other one sits at the second focus with bias -2.
struct Witness {
  Vector user;
  Matrix satellites;
  Vector second_focus;
  double bias_shift = -2.0;
};

/// Builds a witness from the parameters y (one row of n-1 values per
/// satellite); satellite i is (sqrt(1 + |y_i|^2), y_i).
inline Witness witness_from_parameters(const Matrix& ys) {
  const Eigen::Index n = ys.cols() + 1;
  Witness w;
  w.satellites.resize(ys.rows(), n);
  for (Eigen::Index i = 0; i < ys.rows(); ++i) {
    w.satellites(i, 0) = std::sqrt(1.0 + ys.row(i).squaredNorm());
    w.satellites.row(i).tail(n - 1) = ys.row(i);
  }
  w.user = Vector::Zero(n);
  w.user(0) = std::sqrt(2.0);
  w.second_focus = Vector::Zero(n);
  w.second_focus(0) = -w.user(0);
  return w;
}

inline constexpr double kWitnessConditioning = 1e-6;
inline constexpr int kWitnessAttempts = 1000;

inline Witness sample_hyperboloid_witness(std::size_t n, std::size_t m, std::uint64_t seed,
                                          const Tolerance& tol = {}) {
  if (n < 2) throw Error(ErrorCode::InvalidInput, "dimension must be at least 2");
  if (m < n + 1) throw Error(ErrorCode::TooFewSatellites, "need at least n+1 satellites");
  Rng rng(seed);
  for (int attempt = 0; attempt < kWitnessAttempts; ++attempt) {
    const Matrix ys = rng.uniform_matrix(static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(n - 1), -2.0, 2.0);
    Witness w = witness_from_parameters(ys);
    try {
      check_satellites(w.satellites, tol);
    } catch (const Error& e) {
      if (!is_input_error(e.code())) throw;
      continue;
    }
    const Frame f = Frame::of(w.satellites);
    const Vector sv = singular_values(assemble_B(f.to_local_rows(w.satellites)));
    if (sv(sv.size() - 1) < kWitnessConditioning * sv(0)) continue;
    return w;
  }
  throw Error(ErrorCode::DegenerateSampling, "no well-conditioned witness found");
}

}  // namespace mlat
