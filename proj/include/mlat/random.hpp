#pragma once

#include <cstdint>
#include <random>

#include "mlat/numkernel.hpp"

namespace mlat {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Substream k of a master seed: mt19937_64 seeded with
/// splitmix64(master + k * 0x9E3779B97F4A7C15). Substreams depend only on
/// (master, k), so work can be split across any number of threads.
class Rng {
 public:
  explicit Rng(std::uint64_t master, std::uint64_t stream = 0)
      : engine_(splitmix64(master + stream * 0x9E3779B97F4A7C15ULL)) {}

  /// Uniform in [0, 1), built from the top 53 bits so that results do not
  /// depend on the standard library's distribution implementation.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  Vector uniform_vector(Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  Matrix uniform_matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(lo, hi);
    }
    return m;
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlat
