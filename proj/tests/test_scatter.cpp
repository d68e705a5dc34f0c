#include <cmath>
#include <numbers>

#include "doctest.h"
#include "specflow/error.hpp"
#include "specflow/matching.hpp"
#include "specflow/scatter.hpp"
#include "support.hpp"

using namespace specflow;
using std::numbers::pi;

TEST_CASE("lattice Green's function against a truncated resolvent") {
  const std::vector<std::tuple<Complex, long, long>> points{
      {{3.0, 0.0}, 0, 0},  {{-2.5, 0.0}, 1, 0}, {{0.0, 1.0}, 0, 3},  {{1.0, 0.5}, -2, 2},
      {{-1.0, 0.3}, 0, 1}, {{2.1, 0.1}, 4, 0},  {{0.5, -0.7}, 1, 1}, {{5.0, 2.0}, 0, 6},
  };
  for (const auto& [z, m, n] : points) {
    CAPTURE(z);
    const Complex exact = lattice_green(z, m, n);
    CHECK(std::abs(exact - testing::truncated_green(z, m, n, 2000)) < 1e-8);
    CHECK(exact == lattice_green(z, n, m));
  }
}

TEST_CASE("boundary values from small-y extrapolation") {
  const std::vector<double> ys{0.16, 0.08, 0.04, 0.02};
  for (double lambda : {-1.5, -0.5, 0.5, 1.5}) {
    for (long n : {0L, 1L, 3L}) {
      std::vector<Complex> vals;
      for (double y : ys) vals.push_back(testing::truncated_green({lambda, y}, 0, n, 2000));
      CAPTURE(lambda);
      CAPTURE(n);
      CHECK(std::abs(lattice_green(lambda, 0, n) - testing::extrapolate_to_zero(ys, vals)) < 1e-4);
    }
    // Absorbing sign: Im G(λ + i0; 0, 0) = 1/(2 sin k) > 0.
    CHECK(lattice_green(lambda, 0, 0).imag() == doctest::Approx(1.0 / std::sqrt(4.0 - lambda * lambda)));
  }
}

TEST_CASE("Herglotz property and branch errors") {
  testing::Rng rng(61);
  std::uniform_real_distribution<double> x(-4.0, 4.0), y(1e-6, 3.0);
  for (int i = 0; i < 500; ++i) {
    const Complex z(x(rng), y(rng));
    CHECK(lattice_green(z, 0, 0).imag() > 0.0);
    CHECK(std::abs(lattice_zeta(z)) < 1.0);
    const Complex zeta = lattice_zeta(z);
    CHECK(std::abs(zeta + 1.0 / zeta - z) < 1e-10);
    // Continuity of the boundary value from above.
    const double lambda = x(rng);
    if (std::abs(std::abs(lambda) - 2.0) > 0.05) {
      CHECK(std::abs(lattice_green({lambda, 1e-9}, 0, 1) - lattice_green(lambda, 0, 1)) < 1e-6);
    }
  }
  CHECK_THROWS_WITH_AS(lattice_zeta(2.0), doctest::Contains("BranchFailure"), Error);
  CHECK_THROWS_WITH_AS(lattice_green(-2.0, 0, 0), doctest::Contains("BranchFailure"), Error);
}

TEST_CASE("T0 and the reduced scattering matrix") {
  for (const auto& model : {ScatteringModel::rank_one(), ScatteringModel::rank_two()}) {
    for (double lambda : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5}) {
      const Eigen::MatrixXcd t = t0(model, lambda);
      CHECK((t - t.transpose()).norm() < 1e-15);
      const Eigen::MatrixXcd im = (t - t.adjoint()) / Complex(0, 2);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(im).eigenvalues().minCoeff() > 0.0);

      CHECK((tilde_s(model, lambda, 0.0).matrix() - Eigen::MatrixXcd::Identity(model.rank(), model.rank())).norm() == 0.0);
      for (double r : {0.25, 1.0, 3.0, 5.0}) CHECK(unitarity_residual(tilde_s(model, lambda, r).matrix()) < 1e-8);
    }
    const double far = trace_norm(tilde_s(model, {0.5, 1e4}, 1.0).matrix() -
                                  Eigen::MatrixXcd::Identity(model.rank(), model.rank()));
    CHECK(far < 1e-3);
  }

  ScatteringModel bad = ScatteringModel::rank_two();
  bad.coupling(0, 1) = 1.0;
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("InvalidArgument"), Error);
  bad = ScatteringModel::rank_one();
  bad.kappa = {-1.0};
  CHECK_THROWS_AS(t0(bad, 0.5), Error);
}

TEST_CASE("rank-one resonance outside the band") {
  // At λ = 3, T₀ = G(3; 0, 0) = −1/√5, so 1 + T₀ r vanishes at r = √5.
  const auto model = ScatteringModel::rank_one();
  CHECK(t0(model, 3.0)(0, 0).real() == doctest::Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.25 * i);
  const auto res = resonance_scan(model, 3.0, grid);
  REQUIRE(res.size() == 1);
  CHECK(std::abs(res[0].location() - std::sqrt(5.0)) < 1e-9);
  CHECK(res[0].hi - res[0].lo <= 1e-10);
  CHECK_THROWS_WITH_AS(tilde_s(model, 3.0, std::sqrt(5.0)), doctest::Contains("ResonanceHit"), Error);

  CHECK(resonance_scan(model, 3.0, {0.25, 0.5, 1.0}).empty());
  for (const auto& m : {ScatteringModel::rank_one(), ScatteringModel::rank_two()}) {
    for (double lambda : {-1.5, 0.5, 1.0}) CHECK(resonance_scan(m, lambda, grid).empty());
  }
  ScatteringModel off = model;
  off.coupling(0, 0) = 0.0;
  CHECK(resonance_scan(off, 3.0, grid).empty());

  try {
    (void)mu_ac(model, 3.0, 4.0);
    FAIL("expected ResonanceOnPath");
  } catch (const ResonanceOnPath& e) {
    CHECK(std::abs(e.location() - std::sqrt(5.0)) < 1e-8);
  }
}

TEST_CASE("phase flows agree with the integer-part formula") {
  for (const auto& model : {ScatteringModel::rank_one(), ScatteringModel::rank_two()}) {
    for (double lambda : {-1.0, 0.5}) {
      for (double r : {0.5, 2.0, 5.0}) {
        const auto ac = mu_ac(model, lambda, r);
        const auto full = mu_pushnitski(model, lambda, r);
        CHECK(std::abs(mu_integral(ac.mu) - endpoint_sum(ac.track)) < 1e-6);
        CHECK(std::abs(mu_integral(full.mu) - endpoint_sum(full.track)) < 1e-6);
        std::vector<double> ends;
        for (Eigen::Index j = 0; j < ac.track.tracks(); ++j) ends.push_back(ac.track.theta()(j, ac.track.nodes() - 1));
        for (double theta : {0.3, 1.7, 3.1, 4.4, 5.9}) {
          bool at_jump = false;
          for (double e : ends) at_jump |= std::abs(std::remainder(theta - e, kTwoPi)) < 1e-9;
          if (!at_jump) CHECK(ac.mu(theta) == testing::mu_from_phases(ends, theta));
        }
      }
    }
  }
}

TEST_CASE("spectral shift decomposition") {
  const auto zero = xi_decompose(ScatteringModel::rank_one(), 0.5, 0.0);
  CHECK(zero.xi == 0.0);
  CHECK(zero.xi_ac == 0.0);
  CHECK(zero.xi_s == 0.0);

  for (const auto& model : {ScatteringModel::rank_one(), ScatteringModel::rank_two()}) {
    for (double lambda : {-1.5, 0.5}) {
      for (double r : {0.25, 1.0, 2.5, 5.0}) {
        CAPTURE(lambda);
        CAPTURE(r);
        const auto x = xi_decompose(model, lambda, r);
        CHECK(std::abs(x.xi_s - std::round(x.xi_s)) < 1e-6);
        CHECK(x.bk_residual < 1e-6);
        CHECK(x.det_residual < 1e-8);
        CHECK(x.unitarity_residual < 1e-8);
        CHECK(x.spectra_distance < 1e-8);
        if (model.rank() == 1) {
          CHECK(std::abs(x.xi_s) < 1e-6);
          CHECK(x.xi == doctest::Approx(-x.phase_sum / kTwoPi).epsilon(1e-9));
        }
      }
    }
  }
}
