// Certifies a six-satellite constellation, then estimates how often a random
// user has a unique fix with the minimum number of satellites.

#include <cstdio>

#include "mlat/mlat.hpp"

int main() {
  mlat::Rng rng(2024);
  const mlat::Matrix six = rng.uniform_matrix(6, 2, -1, 1);
  const mlat::Certificate cert = mlat::certify_uniqueness(six);
  std::printf("six satellites: %s\n", std::string(mlat::to_string(cert.kind)).c_str());

  for (std::size_t n = 2; n <= 4; ++n) {
    mlat::MonteCarloConfig cfg;
    cfg.n = n;
    cfg.m = n + 1;
    cfg.configurations = 500;
    cfg.users = 200;
    const mlat::Histogram h = mlat::monte_carlo(cfg);
    std::printf("n = %zu, m = %zu: average unique fraction %.3f\n", n, n + 1, h.average);
  }

  const mlat::Witness w = mlat::sample_hyperboloid_witness(3, 5, 7);
  const mlat::SolveReport r = mlat::solve(mlat::synthesize_times(w.satellites, {w.user, 0.0}));
  std::printf("witness in 3-D with 5 satellites: %zu solutions\n", r.solutions.size());
  return 0;
}
