#pragma once

// Quadrics with a focus: the points P with |P - F| = |<u, P> - alpha|.
// e = |u| is the eccentricity and l = <u, F> - alpha the signed semilatus
// rectum. The sheet Q+ is where <u, P> - alpha >= 0.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "mlat/error.hpp"
#include "mlat/numkernel.hpp"

namespace mlat {

enum class QuadricClass { Sphere, ProlateSpheroid, TwoSheetHyperboloid, Cone, Paraboloid };

inline std::string_view to_string(QuadricClass c) {
  switch (c) {
    case QuadricClass::Sphere: return "SPHERE";
    case QuadricClass::ProlateSpheroid: return "PROLATE_SPHEROID";
    case QuadricClass::TwoSheetHyperboloid: return "TWO_SHEET_HYPERBOLOID";
    case QuadricClass::Cone: return "CONE";
    case QuadricClass::Paraboloid: return "PARABOLOID";
  }
  return "UNKNOWN";
}

struct FocalQuadric {
  Vector focus;
  Vector scaled_normal;  // u
  double offset = 0.0;   // alpha
  double eccentricity = 0.0;
  double semilatus = 0.0;  // signed l = <u, F> - alpha
  QuadricClass kind = QuadricClass::Sphere;
  /// a for every class; b only for spheres, spheroids and hyperboloids.
  double semi_axis_a = 0.0;
  std::optional<double> semi_axis_b;

  /// <u, P> - alpha; nonnegative on Q+.
  double directrix_value(const Vector& p) const { return scaled_normal.dot(p) - offset; }

  /// |P - F| - |<u, P> - alpha|; zero on the quadric.
  double defect(const Vector& p) const {
    return (p - focus).norm() - std::abs(directrix_value(p));
  }
};

/// Builds and classifies the quadric from (u, alpha, F). Thresholds apply to
/// e and to l / scale, where scale is the caller's length unit (typically the
/// satellite diameter).
inline FocalQuadric classify_focal(const Vector& u, double alpha, const Vector& focus,
                                   const Tolerance& tol = {}, double scale = 1.0) {
  if (u.size() != focus.size()) {
    throw Error(ErrorCode::InvalidInput, "normal and focus differ in dimension");
  }
  if (!u.allFinite() || !focus.allFinite() || !std::isfinite(alpha) || !(scale > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "non-finite quadric parameters");
  }
  FocalQuadric q;
  q.focus = focus;
  q.scaled_normal = u;
  q.offset = alpha;
  q.eccentricity = u.norm();
  q.semilatus = u.dot(focus) - alpha;

  const double e = q.eccentricity;
  const double abs_l = std::abs(q.semilatus);
  const bool flat = abs_l <= tol.flat_semilatus() * scale;

  if (std::abs(e - 1.0) <= tol.class_abs) {
    if (flat) throw Error(ErrorCode::DegenerateQuadric, "e = 1 with vanishing semilatus");
    q.kind = QuadricClass::Paraboloid;
    q.semi_axis_a = std::sqrt(abs_l);
  } else if (e > 1.0) {
    const double k = e * e - 1.0;
    if (flat) {
      q.kind = QuadricClass::Cone;
      q.semi_axis_a = std::sqrt(k);
    } else {
      q.kind = QuadricClass::TwoSheetHyperboloid;
      q.semi_axis_a = abs_l / k;
      q.semi_axis_b = abs_l / std::sqrt(k);
    }
  } else {
    if (flat) throw Error(ErrorCode::DegenerateQuadric, "e < 1 with vanishing semilatus");
    const double k = 1.0 - e * e;
    q.kind = e <= tol.class_abs ? QuadricClass::Sphere : QuadricClass::ProlateSpheroid;
    q.semi_axis_a = abs_l / k;
    q.semi_axis_b = abs_l / std::sqrt(k);
  }
  return q;
}

struct SecondFocus {
  Vector focus;
  /// Distance between the vertices on the axis: 2|l| / |e^2 - 1|.
  double sheet_distance = 0.0;
  /// 2 l / (1 - e^2); the other focus is F + shift * u.
  double shift = 0.0;
};

inline std::optional<SecondFocus> second_focus(const FocalQuadric& q) {
  switch (q.kind) {
    case QuadricClass::Cone:
    case QuadricClass::Paraboloid:
      return std::nullopt;
    case QuadricClass::Sphere:
      return SecondFocus{q.focus, 2.0 * std::abs(q.semilatus), 0.0};
    default:
      break;
  }
  const double k = 1.0 - q.eccentricity * q.eccentricity;
  const double shift = 2.0 * q.semilatus / k;
  return SecondFocus{q.focus + shift * q.scaled_normal, 2.0 * std::abs(q.semilatus) / std::abs(k),
                     shift};
}

// ---------------------------------------------------------------------------
// Degree-2 monomials, order (1, x_1..x_n, x_1^2..x_n^2, x_1x_2, x_1x_3, ..., x_{n-1}x_n).

inline std::size_t monomial_count(std::size_t n) { return (n + 2) * (n + 1) / 2; }

inline std::size_t linear_index(std::size_t j) { return 1 + j; }
inline std::size_t square_index(std::size_t n, std::size_t j) { return 1 + n + j; }

/// Index of x_j x_k for j < k.
inline std::size_t cross_index(std::size_t n, std::size_t j, std::size_t k) {
  std::size_t idx = 1 + 2 * n;
  for (std::size_t r = 0; r < j; ++r) idx += n - 1 - r;
  return idx + (k - j - 1);
}

inline Vector monomials(const Vector& p) {
  const std::size_t n = static_cast<std::size_t>(p.size());
  Vector out(static_cast<Eigen::Index>(monomial_count(n)));
  out(0) = 1.0;
  std::size_t idx = 1;
  for (std::size_t j = 0; j < n; ++j) out(idx++) = p(j);
  for (std::size_t j = 0; j < n; ++j) out(idx++) = p(j) * p(j);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) out(idx++) = p(j) * p(k);
  }
  return out;
}

/// Coefficients of (<u, P> - alpha)^2 - |P - F|^2.
inline Vector focal_coefficients(const Vector& u, double alpha, const Vector& focus) {
  const std::size_t n = static_cast<std::size_t>(u.size());
  Vector c = Vector::Zero(static_cast<Eigen::Index>(monomial_count(n)));
  c(0) = alpha * alpha - focus.squaredNorm();
  for (std::size_t j = 0; j < n; ++j) {
    c(linear_index(j)) = 2.0 * (focus(j) - alpha * u(j));
    c(square_index(n, j)) = u(j) * u(j) - 1.0;
    for (std::size_t k = j + 1; k < n; ++k) c(cross_index(n, j, k)) = 2.0 * u(j) * u(k);
  }
  return c;
}

inline Vector focal_coefficients(const FocalQuadric& q) {
  return focal_coefficients(q.scaled_normal, q.offset, q.focus);
}

namespace detail {

/// Real roots of a x^2 + b x + c = 0 with a possibly zero; near-zero negative
/// discriminants (relative to gate) are clamped.
inline std::vector<double> real_roots(double a, double b, double c, double a_zero, double gate) {
  std::vector<double> roots;
  if (std::abs(a) <= a_zero) {
    if (b != 0.0) roots.push_back(-c / b);
    return roots;
  }
  double disc = b * b - 4.0 * a * c;
  const double mag = std::max({b * b, std::abs(4.0 * a * c), 1e-300});
  if (disc < -gate * mag) return roots;
  disc = std::max(disc, 0.0);
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    roots.push_back(0.0);
    return roots;
  }
  roots.push_back(q / a);
  roots.push_back(c / q);
  return roots;
}

}  // namespace detail

/// Finds the focal forms (u, alpha, F) of a quadric given by its coefficient
/// vector, if any. The quadratic part must be proportional to u u^T - I.
/// Every returned candidate has been checked to reproduce the coefficients up
/// to a common factor. Foci are returned without duplicates.
inline std::vector<FocalQuadric> recover_focal_parameters(const Vector& coeffs, std::size_t n,
                                                          const Tolerance& tol = {},
                                                          double scale = 1.0) {
  std::vector<FocalQuadric> out;
  if (n < 2 || static_cast<std::size_t>(coeffs.size()) != monomial_count(n)) {
    throw Error(ErrorCode::InvalidInput, "coefficient vector has the wrong length");
  }
  if (!coeffs.allFinite() || coeffs.cwiseAbs().maxCoeff() == 0.0) return out;

  const Eigen::Index N = static_cast<Eigen::Index>(n);
  Matrix s(N, N);
  Vector lin(N);
  for (std::size_t j = 0; j < n; ++j) {
    lin(j) = coeffs(linear_index(j));
    s(j, j) = coeffs(square_index(n, j));
    for (std::size_t k = j + 1; k < n; ++k) {
      s(j, k) = s(k, j) = 0.5 * coeffs(cross_index(n, j, k));
    }
  }
  const double c0 = coeffs(0);
  const double quad_mag = s.cwiseAbs().maxCoeff();
  if (quad_mag == 0.0) return out;

  const SymEigen eig = sym_eigen(s, tol);
  const double gate = std::sqrt(tol.class_abs);
  const double eig_gate = gate * eig.values.cwiseAbs().maxCoeff();

  auto equal_except = [&](Eigen::Index skip, double& rep) {
    double sum = 0.0;
    Eigen::Index cnt = 0;
    for (Eigen::Index i = 0; i < N; ++i) {
      if (i == skip) continue;
      sum += eig.values(i);
      ++cnt;
    }
    rep = sum / static_cast<double>(cnt);
    for (Eigen::Index i = 0; i < N; ++i) {
      if (i != skip && std::abs(eig.values(i) - rep) > eig_gate) return false;
    }
    return true;
  };

  auto consider = [&](const Vector& u, double lambda, const std::vector<double>& alphas) {
    const Vector target = coeffs / lambda;
    const Vector ln = lin / lambda;
    for (double alpha : alphas) {
      const Vector focus = 0.5 * ln + alpha * u;
      const Vector fitted = focal_coefficients(u, alpha, focus);
      const double mag = std::max(1.0, fitted.cwiseAbs().maxCoeff());
      if ((fitted - target).cwiseAbs().maxCoeff() > gate * mag) continue;
      FocalQuadric q;
      try {
        q = classify_focal(u, alpha, focus, tol, scale);
      } catch (const Error&) {
        continue;
      }
      const bool seen = std::any_of(out.begin(), out.end(), [&](const FocalQuadric& o) {
        return (o.focus - q.focus).norm() <= gate * std::max(scale, q.focus.norm());
      });
      if (!seen) out.push_back(std::move(q));
    }
  };

  double rep = 0.0;
  if (equal_except(-1, rep)) {
    // Sphere: u = 0 and alpha^2 = |F|^2 - c0 / lambda with F = lin / (2 lambda).
    const double lambda = -rep;
    const Vector ln = lin / lambda;
    const double r2 = 0.25 * ln.squaredNorm() + c0 / lambda;
    if (r2 > 0.0) consider(Vector::Zero(N), lambda, {-std::sqrt(r2)});
    return out;
  }

  for (Eigen::Index k = 0; k < N; ++k) {
    if (!equal_except(k, rep) || rep == 0.0) continue;
    const double lambda = -rep;
    double e2 = 1.0 + eig.values(k) / lambda;
    if (e2 < -gate) continue;
    e2 = std::max(e2, 0.0);
    const Vector u = std::sqrt(e2) * eig.vectors.col(k);
    const Vector ln = lin / lambda;
    const double a = 1.0 - e2;
    const double b = -ln.dot(u);
    const double c = -(0.25 * ln.squaredNorm() + c0 / lambda);
    consider(u, lambda, detail::real_roots(a, b, c, tol.class_abs, gate));
  }
  return out;
}

}  // namespace mlat
