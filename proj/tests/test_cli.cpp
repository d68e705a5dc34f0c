// Drives the specflow executable end to end.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "specflow/io.hpp"
#include "specflow/matching.hpp"
#include "specflow/unispec.hpp"
#include "support.hpp"

using namespace specflow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const fs::path& dir, const std::string& args) {
  fs::create_directories(dir);
  const fs::path log = dir / "stdout.txt";
  const std::string cmd = std::string(SPECFLOW_BIN) + " --out " + dir.string() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(status), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "specflow_cli_tests" / name;
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("metric output matches the library bit for bit") {
  testing::Rng rng(81);
  for (int trial = 0; trial < 5; ++trial) {
    const Space space = trial % 2 ? Space::circle : Space::line;
    const auto s = testing::random_set(rng, space, 5), t = testing::random_set(rng, space, 5);
    const fs::path dir = scratch("metric" + std::to_string(trial));
    fs::create_directories(dir);
    std::ofstream(dir / "in.json") << io::json{{"S", io::rigged_to_json(s)}, {"T", io::rigged_to_json(t)}}.dump();
    const auto r = run(dir, "metric " + (dir / "in.json").string());
    REQUIRE(r.code == 0);
    const auto m = distance_d(s, t);
    CHECK(r.out == io::format_double(m.cost, 12) + "\n");
    std::stringstream csv;
    io::write_matching_csv(csv, m);
    CHECK(slurp(dir / "matching.csv") == csv.str());
  }
}

TEST_CASE("track of exp(irH) agrees with direct diagonalization at every node") {
  const fs::path dir = scratch("track_exp");
  const auto r = run(dir, std::string("track \"exp(irH)\" --r-max 3 --hamiltonian ") + SPECFLOW_DATA + "/hamiltonian.json");
  REQUIRE(r.code == 0);
  std::ifstream h_in(std::string(SPECFLOW_DATA) + "/hamiltonian.json");
  const Eigen::MatrixXcd h = io::matrix_from_json(io::json::parse(h_in));
  std::ifstream csv(dir / "track.csv");
  const auto track = io::read_track_csv(csv);
  REQUIRE(track.nodes() > 2);
  CHECK(track.grid().back() == 3.0);
  for (Eigen::Index k = 0; k < track.nodes(); ++k) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h).eigenvalues() * track.grid()[k];
    std::vector<double> angles(ev.data(), ev.data() + ev.size());
    CHECK(distance_d(project(track, k), RiggedSet::from_angles(angles, 1e-7)).cost < 1e-8);
  }
}

TEST_CASE("builtin and sampled loops") {
  const fs::path dir = scratch("loop2");
  REQUIRE(run(dir, "track \"loop N=2\"").code == 0);
  std::ifstream csv(dir / "track.csv");
  const auto track = io::read_track_csv(csv);
  REQUIRE(track.tracks() == 2);
  for (Eigen::Index k = 0; k < track.nodes(); ++k) {
    CHECK(track.theta()(0, k) == doctest::Approx(kTwoPi * track.grid()[k]).epsilon(1e-12));
    CHECK(track.theta()(1, k) == doctest::Approx(kTwoPi * track.grid()[k]).epsilon(1e-12));
  }

  const auto sampled = run(scratch("sampled"), std::string("mu --samples ") + SPECFLOW_DATA + "/samples_loop.json");
  CHECK(sampled.code == 0);
  CHECK(sampled.out.find("loop winding 1") != std::string::npos);
}

TEST_CASE("outputs are deterministic") {
  const auto a = run(scratch("verify_a"), "verify"), b = run(scratch("verify_b"), "verify");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  const std::string cfg = std::string("scatter ") + SPECFLOW_DATA + "/scatter_small.json";
  const fs::path d1 = scratch("scatter_a"), d2 = scratch("scatter_b");
  REQUIRE(run(d1, cfg).code == 0);
  REQUIRE(run(d2, cfg).code == 0);
  CHECK(slurp(d1 / "scatter.csv") == slurp(d2 / "scatter.csv"));
}
