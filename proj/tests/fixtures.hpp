#pragma once

#include <cmath>

#include "mlat/mlat.hpp"

namespace fixtures {

using mlat::Matrix;
using mlat::Vector;

inline Matrix rows(std::initializer_list<std::initializer_list<double>> r) {
  Matrix m(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& row : r) {
    Eigen::Index j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

/// Four satellites on a cone of revolution with vertex at the origin.
inline mlat::Scenario cone3d() {
  const double r2 = std::sqrt(2.0);
  return {rows({{3, 4, 5}, {5, 12, 13}, {8, 15, 17}, {7, 24, 25}}),
          vec({5 * r2, 13 * r2, 17 * r2, 25 * r2})};
}

/// Five satellites on one branch of 16y^2 - 9x^2 = 1296, user at the focus (0, 15).
inline Matrix hyperbola2d_satellites() {
  return rows({{-28.8, 23.4}, {-6.4, 10.2}, {-2.7, 9.225}, {9, 11.25}, {16, 15}});
}

inline mlat::Scenario hyperbola2d() {
  return {hyperbola2d_satellites(), vec({30, 8, 6.375, 9.75, 16})};
}

/// The planar example rotated about the axis: seven satellites in 3-D.
inline mlat::Scenario hyperbola3d() {
  return {rows({{0, 0, 9},
                {-28.8, 0, 23.4},
                {0, -28.8, 23.4},
                {6.4, 0, 10.2},
                {0, -6.4, 10.2},
                {9.6, -12.8, 15},
                {9.6, 12.8, 15}}),
          vec({6, 30, 30, 8, 8, 16, 16})};
}

/// Satellites (+-1, 0), (0, +-1) with all times 1: user at the centre.
inline mlat::Scenario unit_circle() {
  return {rows({{1, 0}, {-1, 0}, {0, 1}, {0, -1}}), vec({1, 1, 1, 1})};
}

/// Uniform satellites in [-1, 1]^n that pass validation.
inline Matrix random_satellites(mlat::Rng& rng, Eigen::Index m, Eigen::Index n) {
  for (;;) {
    Matrix s = rng.uniform_matrix(m, n, -1.0, 1.0);
    try {
      mlat::check_satellites(s);
      return s;
    } catch (const mlat::Error&) {
    }
  }
}

}  // namespace fixtures
