#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(MLAT_CLI) + " " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(MLAT_DATA) + "/" + name; }

}  // namespace

TEST(Cli, SolveCone) {
  const CliRun r = run("solve --in " + data("cone3d.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["branch"], "RANK_DEFICIENT");
  ASSERT_EQ(j["solutions"].size(), 1u);
  EXPECT_NEAR(j["solutions"][0]["bias"].get<double>(), 0.0, 1e-9);
}

TEST(Cli, ClassifyHyperbola) {
  const CliRun r = run("classify --satellites " + data("hyperbola2d_sats.json") + " --user 0,15");
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["case_label"], "HYPERBOLOID");
  EXPECT_NEAR(j["alternate"]["bias"].get<double>(), -18.0, 1e-9);
  EXPECT_NEAR(j["alternate"]["user"][1].get<double>(), -15.0, 1e-9);
}

TEST(Cli, SynthThenSolve) {
  const CliRun r = run("synth --satellites " + data("hyperbola2d_sats.json") + " --in " +
                    data("hyperbola2d_truth.json"));
  ASSERT_EQ(r.code, 0) << r.out;
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["times"][0].get<double>(), 30.0, 1e-12);
  EXPECT_NEAR(j["times"][2].get<double>(), 6.375, 1e-12);
}

TEST(Cli, CertifyInconclusiveExitsTwo) {
  const CliRun r = run("certify --satellites " + data("hyperbola2d_sats.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.out)["certificate"], "INCONCLUSIVE");
}

TEST(Cli, WitnessIsReproducible) {
  const CliRun a = run("witness --n 3 --m 6 --seed 5");
  const CliRun b = run("witness --n 3 --m 6 --seed 5");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json::parse(a.out)["satellites"].size(), 6u);
}

TEST(Cli, MonteCarloIsByteIdentical) {
  const std::string args = "montecarlo --n 2 --m 3 --configs 50 --users 50 --seed 42";
  const CliRun a = run(args + " --threads 1");
  const CliRun b = run(args + " --threads 3");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("bin_lo,bin_hi,fraction\n", 0), 0u);
}

TEST(Cli, RegionMap) {
  const CliRun r = run("regionmap --satellites " + data("hyperbola2d_sats.json") +
                    " --bbox -35,35,-20,25 --resolution 91");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("\n0,15,HYPERBOLOID\n"), std::string::npos);
}

TEST(Cli, ErrorsAreStructured) {
  CliRun r = run("solve --in /nonexistent.json");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.out)["error"], "InvalidInput");

  r = run("classify --satellites " + data("hyperbola2d_sats.json") + " --user 0,abc");
  EXPECT_EQ(r.code, 1);

  r = run("solve --in " + data("cone3d.json") + " --rank-tol 2");
  EXPECT_EQ(r.code, 1);

  r = run("bogus");
  EXPECT_NE(r.code, 0);
}
