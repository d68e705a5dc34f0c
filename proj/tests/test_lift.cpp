#include <numbers>

#include "doctest.h"
#include "specflow/error.hpp"
#include "specflow/lift.hpp"
#include "specflow/matching.hpp"
#include "specflow/mu.hpp"
#include "specflow/unispec.hpp"
#include "support.hpp"

using namespace specflow;
using std::numbers::pi;

namespace {

SpectrumPath loop_path(int copies) {
  SpectrumPath p;
  p.sampler = [copies](double r) {
    std::vector<double> a(copies, kTwoPi * r);
    return RiggedSet::from_angles(a);
  };
  return p;
}

SpectrumPath diag_path() {
  SpectrumPath p;
  p.sampler = [](double r) {
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
    u(0, 0) = std::polar(1.0, pi * r);
    u(1, 1) = std::polar(1.0, -pi * r / 2);
    return spec(UnitaryTC(u));
  };
  return p;
}

}  // namespace

TEST_CASE("constant empty path gives an empty track") {
  SpectrumPath p;
  p.sampler = [](double) { return RiggedSet(Space::circle); };
  const auto t = lift_path(p);
  CHECK(t.tracks() == 0);
  CHECK(t.nodes() >= 2);
  CHECK(endpoint_sum(t) == 0.0);
  CHECK(project(t, 0).empty());
}

TEST_CASE("N-fold loop lifts to straight lines") {
  for (int n : {1, 3}) {
    const auto t = lift_path(loop_path(n));
    REQUIRE(t.tracks() == n);
    for (Eigen::Index k = 0; k < t.nodes(); ++k) {
      for (Eigen::Index j = 0; j < n; ++j) CHECK(t.theta()(j, k) == doctest::Approx(kTwoPi * t.grid()[k]).epsilon(1e-12));
    }
    CHECK(t.theta()(0, t.nodes() - 1) == kTwoPi);
    CHECK(endpoint_sum(t) == doctest::Approx(kTwoPi * n).epsilon(1e-12));
  }
}

TEST_CASE("diagonal path follows the closed-form eigenvalues") {
  const auto t = lift_path(diag_path());
  REQUIRE(t.tracks() == 2);
  for (Eigen::Index k = 1; k < t.nodes(); ++k) {
    const double r = t.grid()[k];
    std::vector<double> got{t.theta()(0, k), t.theta()(1, k)};
    std::sort(got.begin(), got.end());
    CHECK(got[0] == doctest::Approx(-pi * r / 2).epsilon(1e-9));
    CHECK(got[1] == doctest::Approx(pi * r).epsilon(1e-9));
  }
  CHECK(endpoint_sum(t) == doctest::Approx(pi / 2).epsilon(1e-9));
}

TEST_CASE("projection") {
  Eigen::MatrixXd th(3, 1);
  th << kTwoPi, kTwoPi + pi / 2, -kTwoPi;
  const ArgumentTrack t({0.0}, th, false);
  const auto s = project(t, 0);
  REQUIRE(s.rank() == 1);
  CHECK(s.points()[0].x == doctest::Approx(pi / 2));
  CHECK(project(ArgumentTrack({0.0}, Eigen::MatrixXd::Zero(2, 1), true), 0).empty());
  CHECK_THROWS_AS(project(t, 1), Error);
}

TEST_CASE("round trip, step bound and displacement consistency on random paths") {
  testing::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 5;
    const Eigen::MatrixXcd h = testing::random_hermitian(rng, n, 2.0);
    SpectrumPath p;
    p.sampler = [h](double r) { return spec(UnitaryTC(expi_hermitian(h, r))); };
    const LiftOptions opt;
    const auto t = lift_path(p, opt);
    for (Eigen::Index k = 0; k < t.nodes(); ++k) {
      CHECK(distance_d(project(t, k), p.sampler(t.grid()[k])).cost < opt.node_tol);
      if (k == 0) continue;
      const Eigen::VectorXd step = t.theta().col(k) - t.theta().col(k - 1);
      CHECK(step.cwiseAbs().maxCoeff() < pi / 2);
      const double d = distance_d(project(t, k - 1), project(t, k)).cost;
      CHECK(step.cwiseAbs().sum() <= d + static_cast<double>(n) * opt.node_tol);
    }
    for (Eigen::Index j = 0; j < t.tracks(); ++j) CHECK(t.theta()(j, 0) == 0.0);
    const auto tails = tail_sums(t);
    for (std::size_t k = 1; k < tails.size(); ++k) CHECK(tails[k] <= tails[k - 1]);
    CHECK(tails.back() == 0.0);
  }
}

TEST_CASE("lifting errors") {
  SpectrumPath jump;
  jump.sampler = [](double r) { return RiggedSet(Space::circle, {{r < 0.5 ? pi / 2 : 3 * pi / 2, 1}}); };
  jump.starts_at_identity = false;
  LiftOptions shallow;
  shallow.max_depth = 6;
  try {
    (void)lift_path(jump, shallow);
    FAIL("expected DepthExceeded");
  } catch (const DepthExceeded& e) {
    CHECK(e.r0() < 0.5);
    CHECK(e.r1() >= 0.5);
    CHECK(e.r1() - e.r0() < 0.1);
  }

  SpectrumPath flaky;
  int calls = 0;
  flaky.sampler = [&calls](double) { return RiggedSet(Space::circle, {{1.0 + 0.01 * ++calls, 1}}); };
  flaky.starts_at_identity = false;
  CHECK_THROWS_WITH_AS(lift_path(flaky), doctest::Contains("SamplerInconsistent"), Error);

  SpectrumPath not_identity;
  not_identity.sampler = [](double) { return RiggedSet(Space::circle, {{1.0, 1}}); };
  CHECK_THROWS_WITH_AS(lift_path(not_identity), doctest::Contains("SamplerInconsistent"), Error);

  LiftOptions bad;
  bad.step_tol = 0;
  CHECK_THROWS_AS(lift_path(loop_path(1), bad), Error);
}

TEST_CASE("general start uses principal arguments") {
  SpectrumPath p;
  p.starts_at_identity = false;
  p.sampler = [](double r) { return RiggedSet::from_angles(std::vector<double>{5.0 + r, 1.0 - r}); };
  const auto t = lift_path(p);
  REQUIRE(t.tracks() == 2);
  CHECK(!t.starts_at_identity());
  std::vector<double> first{t.theta()(0, 0), t.theta()(1, 0)};
  std::sort(first.begin(), first.end());
  CHECK(first[0] == doctest::Approx(5.0 - kTwoPi));
  CHECK(first[1] == doctest::Approx(1.0));
  CHECK(endpoint_sum(t) == doctest::Approx(0.0).epsilon(1e-12));
}
