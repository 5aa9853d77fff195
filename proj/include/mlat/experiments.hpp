#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "mlat/error.hpp"
#include "mlat/model.hpp"
#include "mlat/random.hpp"
#include "mlat/uniqueness.hpp"

namespace mlat {

inline constexpr std::size_t kHistogramBins = 50;

struct Histogram {
  /// Fraction of configurations per bin; bin k covers [k/50, (k+1)/50),
  /// the last bin also holds p = 1.
  std::array<double, kHistogramBins> fractions{};
  std::array<std::uint64_t, kHistogramBins> counts{};
  double average = 0.0;
  std::uint64_t configurations = 0;
  std::uint64_t users_per_configuration = 0;
  /// Satellite draws rejected as coplanar or duplicated.
  std::uint64_t rejected_configurations = 0;
  /// User draws redrawn because classification hit a numerical error.
  std::uint64_t rejected_users = 0;
  /// Per-configuration uniqueness fractions, in configuration order.
  std::vector<double> per_configuration;
};

struct MonteCarloConfig {
  std::size_t n = 2;
  std::size_t m = 3;
  std::size_t configurations = 10000;
  std::size_t users = 1000;
  std::uint64_t seed = 42;
  /// Satellites and users are drawn uniformly from [-box, box]^n.
  double box = 1.0;
  /// 0 picks std::thread::hardware_concurrency().
  std::size_t threads = 0;
  Tolerance tol{};
};

inline std::size_t histogram_bin(double p) {
  const auto k = static_cast<std::size_t>(std::floor(p * static_cast<double>(kHistogramBins)));
  return std::min(k, kHistogramBins - 1);
}

struct ConfigurationOutcome {
  double fraction = 0.0;
  std::uint64_t rejected_configurations = 0;
  std::uint64_t rejected_users = 0;
};

/// Uniqueness fraction for configuration `index`. Uses its own random
/// substream so the result does not depend on scheduling.
inline ConfigurationOutcome run_configuration(const MonteCarloConfig& cfg, std::uint64_t index) {
  Rng rng(cfg.seed, index);
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto m = static_cast<Eigen::Index>(cfg.m);
  ConfigurationOutcome out;
  for (;;) {
    const Matrix sats = rng.uniform_matrix(m, n, -cfg.box, cfg.box);
    std::optional<UniquenessClassifier> classifier;
    try {
      classifier.emplace(sats, cfg.tol);
    } catch (const Error&) {
      ++out.rejected_configurations;
      continue;
    }
    std::size_t unique = 0;
    std::size_t done = 0;
    std::size_t failures = 0;
    while (done < cfg.users) {
      const Vector x = rng.uniform_vector(n, -cfg.box, cfg.box);
      try {
        if (classifier->classify(x).unique) ++unique;
        ++done;
      } catch (const Error&) {
        ++out.rejected_users;
        if (++failures > 100 * cfg.users) {
          throw Error(ErrorCode::DegenerateSampling, "user classification keeps failing");
        }
      }
    }
    out.fraction = static_cast<double>(unique) / static_cast<double>(cfg.users);
    return out;
  }
}

inline Histogram monte_carlo(const MonteCarloConfig& cfg) {
  if (cfg.n < 2) throw Error(ErrorCode::InvalidInput, "dimension must be at least 2");
  if (cfg.m < cfg.n + 1) throw Error(ErrorCode::TooFewSatellites, "need at least n+1 satellites");
  if (cfg.configurations == 0 || cfg.users == 0) {
    throw Error(ErrorCode::InvalidInput, "counts must be positive");
  }
  if (!(cfg.box > 0.0) || !std::isfinite(cfg.box)) {
    throw Error(ErrorCode::InvalidInput, "box half-width must be positive");
  }
  cfg.tol.check();

  std::size_t workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, cfg.configurations);

  std::vector<ConfigurationOutcome> outcomes(cfg.configurations);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t k = w; k < cfg.configurations; k += workers) {
        outcomes[k] = run_configuration(cfg, k);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  Histogram h;
  h.configurations = cfg.configurations;
  h.users_per_configuration = cfg.users;
  h.per_configuration.reserve(cfg.configurations);
  double sum = 0.0;
  for (const auto& o : outcomes) {
    ++h.counts[histogram_bin(o.fraction)];
    sum += o.fraction;
    h.rejected_configurations += o.rejected_configurations;
    h.rejected_users += o.rejected_users;
    h.per_configuration.push_back(o.fraction);
  }
  h.average = sum / static_cast<double>(cfg.configurations);
  for (std::size_t k = 0; k < kHistogramBins; ++k) {
    h.fractions[k] = static_cast<double>(h.counts[k]) / static_cast<double>(cfg.configurations);
  }
  return h;
}

// ---------------------------------------------------------------------------

struct BoundingBox {
  double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
};

/// Classification on a resolution x resolution grid whose end points lie on
/// the box boundary. Points where classification hits a numerical error are
/// labelled DEGENERATE.
struct RegionMap {
  BoundingBox box;
  std::size_t resolution = 0;
  /// Row-major over (y index, x index).
  std::vector<std::string> labels;
  std::vector<Vector> points;
};

inline double grid_coordinate(double lo, double hi, std::size_t k, std::size_t res) {
  return lo + ((hi - lo) * static_cast<double>(k)) / static_cast<double>(res - 1);
}

inline RegionMap region_map(const Matrix& satellites, const BoundingBox& box,
                            std::size_t resolution, const Tolerance& tol = {}) {
  if (satellites.cols() != 2) throw Error(ErrorCode::InvalidInput, "region maps need n = 2");
  if (resolution < 2) throw Error(ErrorCode::InvalidInput, "resolution must be at least 2");
  if (!(box.x_lo < box.x_hi) || !(box.y_lo < box.y_hi)) {
    throw Error(ErrorCode::InvalidInput, "empty bounding box");
  }
  const UniquenessClassifier classifier(satellites, tol);
  RegionMap map;
  map.box = box;
  map.resolution = resolution;
  map.labels.reserve(resolution * resolution);
  map.points.reserve(resolution * resolution);
  for (std::size_t j = 0; j < resolution; ++j) {
    for (std::size_t i = 0; i < resolution; ++i) {
      Vector x(2);
      x << grid_coordinate(box.x_lo, box.x_hi, i, resolution),
          grid_coordinate(box.y_lo, box.y_hi, j, resolution);
      std::string label;
      try {
        label = std::string(to_string(classifier.classify(x).case_label));
      } catch (const Error&) {
        label = "DEGENERATE";
      }
      map.labels.push_back(std::move(label));
      map.points.push_back(std::move(x));
    }
  }
  return map;
}

// ---------------------------------------------------------------------------
// CSV output

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << "bin_lo,bin_hi,fraction\n";
  for (std::size_t k = 0; k < kHistogramBins; ++k) {
    const double lo = static_cast<double>(k) / kHistogramBins;
    const double hi = static_cast<double>(k + 1) / kHistogramBins;
    os << format_double(lo) << ',' << format_double(hi) << ',' << format_double(h.fractions[k])
       << '\n';
  }
  os << "# average=" << format_double(h.average) << " configurations=" << h.configurations
     << " users=" << h.users_per_configuration
     << " rejected_configurations=" << h.rejected_configurations
     << " rejected_users=" << h.rejected_users << '\n';
}

inline void write_region_map_csv(std::ostream& os, const RegionMap& map) {
  os << "x1,x2,label\n";
  for (std::size_t k = 0; k < map.labels.size(); ++k) {
    os << format_double(map.points[k](0)) << ',' << format_double(map.points[k](1)) << ','
       << map.labels[k] << '\n';
  }
}

}  // namespace mlat
