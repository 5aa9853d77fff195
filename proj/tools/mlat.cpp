#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlat/io.hpp"
#include "mlat/mlat.hpp"

namespace {

using mlat::Error;
using mlat::ErrorCode;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const std::string& path) { return mlat::io::parse(read_file(path)); }

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, what + ": cannot parse '" + item + "'");
    }
  }
  if (out.empty()) throw Error(ErrorCode::InvalidInput, what + " is empty");
  return out;
}

mlat::Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const mlat::Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

struct Output {
  std::string path;

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
    out << text;
  }
  void write(const json& j) const { write(j.dump(2) + "\n"); }
};

struct Options {
  std::string in;
  std::string out;
  std::string satellites;
  std::string user;
  std::size_t n = 2;
  std::size_t m = 3;
  std::size_t configs = 10000;
  std::size_t users = 1000;
  std::uint64_t seed = 42;
  double box = 1.0;
  std::string bbox;
  std::size_t resolution = 100;
  std::size_t threads = 0;
  mlat::Tolerance tol;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact multilateration solver and uniqueness analysis"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "Output file (default: stdout)");
    sub->add_option("--rank-tol", o.tol.rank_rel, "Relative singular value cutoff")
        ->capture_default_str();
    sub->add_option("--class-tol", o.tol.class_abs, "Classification threshold")
        ->capture_default_str();
    sub->add_option("--root-tol", o.tol.double_root, "Double-root discriminant threshold")
        ->capture_default_str();
  };

  auto* solve = app.add_subcommand("solve", "Solve a scenario (JSON with satellites and times)");
  solve->add_option("--in", o.in, "Scenario JSON")->required();
  common(solve);

  auto* synth = app.add_subcommand("synth", "Synthesize arrival times for a ground truth");
  synth->add_option("--satellites", o.satellites, "JSON with satellites")->required();
  auto* synth_in = synth->add_option("--in", o.in, "Ground truth JSON {user, bias}");
  synth->add_option("--user", o.user, "User position x1,x2,... (bias 0)")->excludes(synth_in);
  common(synth);

  auto* classify = app.add_subcommand("classify", "Decide uniqueness for a user position");
  classify->add_option("--satellites", o.satellites, "JSON with satellites")->required();
  classify->add_option("--user", o.user, "User position x1,x2,...")->required();
  common(classify);

  auto* certify = app.add_subcommand("certify", "Certify uniqueness for all user positions");
  certify->add_option("--satellites", o.satellites, "JSON with satellites")->required();
  common(certify);

  auto* witness = app.add_subcommand("witness", "Sample a configuration with two solutions");
  witness->add_option("--n", o.n, "Dimension")->required();
  witness->add_option("--m", o.m, "Number of satellites")->required();
  witness->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  common(witness);

  auto* mc = app.add_subcommand("montecarlo", "Histogram of uniqueness fractions");
  mc->add_option("--n", o.n, "Dimension")->required();
  mc->add_option("--m", o.m, "Number of satellites")->required();
  mc->add_option("--configs", o.configs, "Satellite configurations")->capture_default_str();
  mc->add_option("--users", o.users, "User positions per configuration")->capture_default_str();
  mc->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  mc->add_option("--box", o.box, "Half-width of the sampling cube")->capture_default_str();
  mc->add_option("--threads", o.threads, "Worker threads (0: hardware)")->capture_default_str();
  common(mc);

  auto* region = app.add_subcommand("regionmap", "Label a grid of user positions (n = 2)");
  region->add_option("--satellites", o.satellites, "JSON with satellites")->required();
  region->add_option("--bbox", o.bbox, "xlo,xhi,ylo,yhi")->required();
  region->add_option("--resolution", o.resolution, "Grid points per axis")->capture_default_str();
  common(region);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const Output out{o.out};
  try {
    o.tol.check();
    if (*solve) {
      const mlat::Scenario s = mlat::io::read_scenario(read_json(o.in));
      out.write(mlat::io::to_json(mlat::solve(s, o.tol)));
    } else if (*synth) {
      const mlat::Matrix sats = mlat::io::read_satellites(read_json(o.satellites));
      mlat::GroundTruth truth;
      if (!o.in.empty()) {
        truth = mlat::io::read_ground_truth(read_json(o.in));
      } else if (!o.user.empty()) {
        truth.user = to_vector(parse_list(o.user, "--user"));
      } else {
        throw Error(ErrorCode::InvalidInput, "synth needs --in or --user");
      }
      out.write(mlat::io::to_json(mlat::synthesize_times(sats, truth, o.tol)));
    } else if (*classify) {
      const mlat::Matrix sats = mlat::io::read_satellites(read_json(o.satellites));
      const mlat::Vector x = to_vector(parse_list(o.user, "--user"));
      out.write(mlat::io::to_json(mlat::classify_uniqueness(sats, x, o.tol)));
    } else if (*certify) {
      const mlat::Matrix sats = mlat::io::read_satellites(read_json(o.satellites));
      const mlat::Certificate cert = mlat::certify_uniqueness(sats, o.tol);
      out.write(mlat::io::to_json(cert));
      if (!cert.certified()) return 2;
    } else if (*witness) {
      out.write(mlat::io::to_json(mlat::sample_hyperboloid_witness(o.n, o.m, o.seed, o.tol)));
    } else if (*mc) {
      mlat::MonteCarloConfig cfg;
      cfg.n = o.n;
      cfg.m = o.m;
      cfg.configurations = o.configs;
      cfg.users = o.users;
      cfg.seed = o.seed;
      cfg.box = o.box;
      cfg.threads = o.threads;
      cfg.tol = o.tol;
      std::ostringstream csv;
      mlat::write_histogram_csv(csv, mlat::monte_carlo(cfg));
      out.write(csv.str());
    } else if (*region) {
      const mlat::Matrix sats = mlat::io::read_satellites(read_json(o.satellites));
      const std::vector<double> b = parse_list(o.bbox, "--bbox");
      if (b.size() != 4) throw Error(ErrorCode::InvalidInput, "--bbox needs four numbers");
      std::ostringstream csv;
      mlat::write_region_map_csv(
          csv, mlat::region_map(sats, mlat::BoundingBox{b[0], b[1], b[2], b[3]}, o.resolution,
                                o.tol));
      out.write(csv.str());
    }
  } catch (const Error& e) {
    std::cerr << mlat::io::error_json(e).dump() << "\n";
    return mlat::is_input_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "InternalError"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
