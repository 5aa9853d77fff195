// Solves a planar scenario with two admissible fixes, then reports which
// quadric the user sits on and where the mirror fix lies.

#include <cstdio>

#include "mlat/mlat.hpp"

int main() {
  mlat::Matrix sats(5, 2);
  sats << -28.8, 23.4, -6.4, 10.2, -2.7, 9.225, 9, 11.25, 16, 15;

  const mlat::Vector user = (mlat::Vector(2) << 0, 15).finished();
  const mlat::Scenario scenario = mlat::synthesize_times(sats, {user, 0.0});

  const mlat::SolveReport report = mlat::solve(scenario);
  std::printf("rank(A) = %zu, %zu solution(s)\n", report.rank_A, report.solutions.size());
  for (const mlat::Solution& s : report.solutions) {
    std::printf("  x = (%g, %g)  t = %g\n", s.user(0), s.user(1), s.bias);
  }

  const mlat::UniquenessReport u = mlat::classify_uniqueness(sats, user);
  std::printf("case: %s, unique: %s\n", std::string(mlat::to_string(u.case_label)).c_str(),
              u.unique ? "yes" : "no");
  if (u.quadric) {
    std::printf("eccentricity %g, semilatus %g\n", u.quadric->eccentricity, u.quadric->semilatus);
  }
  if (u.alternate) {
    std::printf("mirror fix: x = (%g, %g)  t = %g\n", u.alternate->user(0), u.alternate->user(1),
                u.alternate->bias);
  }
  return 0;
}
