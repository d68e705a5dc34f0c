// Shared generators and independent oracles for the test suites.
#ifndef SPECFLOW_TESTS_SUPPORT_HPP
#define SPECFLOW_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "specflow/rigged.hpp"
#include "specflow/step_function.hpp"
#include "specflow/unispec.hpp"

namespace specflow::testing {

using Rng = std::mt19937_64;

/// Random circle or line set with total rank in [0, max_rank]. Points are
/// drawn from a coarse lattice half of the time so coincidences and
/// multiplicities actually occur.
inline RiggedSet random_set(Rng& rng, Space space, int max_rank) {
  std::uniform_int_distribution<int> rank_dist(0, max_rank);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int rank = rank_dist(rng);
  const bool lattice = unit(rng) < 0.5;
  std::vector<RiggedPoint> pts;
  for (int i = 0; i < rank; ++i) {
    double x;
    if (space == Space::circle) {
      x = lattice ? kTwoPi * (1 + static_cast<int>(unit(rng) * 7)) / 8.0 : kTwoPi * (0.001 + 0.998 * unit(rng));
    } else {
      x = lattice ? 0.5 * (1 + static_cast<int>(unit(rng) * 6)) : 0.01 + 3.0 * unit(rng);
      if (unit(rng) < 0.5) x = -x;
    }
    pts.push_back({x, 1});
  }
  return RiggedSet(space, std::move(pts));
}

/// Brute-force ρ₁: scan every integer shift between the extreme values of g − f.
inline double rho1_scan(const StepFunction& f, const StepFunction& g) {
  const auto h = (f - g).pieces();
  int lo = h.front().value, hi = h.front().value;
  for (const auto& p : h) {
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
  }
  double best = INFINITY;
  for (int n = -hi - 1; n <= -lo + 1; ++n) {
    double s = 0.0;
    for (const auto& p : h) s += std::abs(p.value + n) * (p.to - p.from);
    best = std::min(best, s);
  }
  return best;
}

/// Haar-like random unitary from the QR factorization of a complex Gaussian matrix.
inline Eigen::MatrixXcd random_unitary(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

inline Eigen::MatrixXcd random_hermitian(Rng& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
  return scale * 0.5 * (a + a.adjoint());
}

/// V diag(e^{iφ}) V* for given phases.
inline Eigen::MatrixXcd unitary_with_phases(const Eigen::MatrixXcd& v, const std::vector<double>& phases) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(phases.size()));
  for (std::size_t i = 0; i < phases.size(); ++i) d(static_cast<Eigen::Index>(i)) = std::polar(1.0, phases[i]);
  return v * d.asDiagonal() * v.adjoint();
}

/// ((H_N − z)⁻¹)(m, n) for the Laplacian truncated to sites −half..half with
/// Dirichlet ends, by the Thomas algorithm on the tridiagonal system.
inline std::complex<double> truncated_green(std::complex<double> z, long m, long n, long half) {
  const long size = 2 * half + 1;
  std::vector<std::complex<double>> d(size, 0.0);
  d[n + half] = 1.0;
  // Diagonal −z, off-diagonals 1.
  std::vector<std::complex<double>> cp(size), dp(size);
  cp[0] = 1.0 / (-z);
  dp[0] = d[0] / (-z);
  for (long i = 1; i < size; ++i) {
    const std::complex<double> denom = -z - cp[i - 1];
    cp[i] = 1.0 / denom;
    dp[i] = (d[i] - dp[i - 1]) / denom;
  }
  std::vector<std::complex<double>> x(size);
  x[size - 1] = dp[size - 1];
  for (long i = size - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
  return x[m + half];
}

/// Integer-part formula for μ from the end phases of a path started at the identity:
/// −Σⱼ floor((θ − θⱼ)/2π) at a continuity angle θ.
inline int mu_from_phases(const std::vector<double>& end_phases, double theta) {
  int v = 0;
  for (double t : end_phases) v -= static_cast<int>(std::floor((theta - t) / kTwoPi));
  return v;
}

/// Neville extrapolation to x = 0 of samples (xs[i], ys[i]).
inline std::complex<double> extrapolate_to_zero(const std::vector<double>& xs, std::vector<std::complex<double>> ys) {
  const std::size_t n = xs.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      const double a = xs[i], b = xs[i + level];
      ys[i] = (b * ys[i] - a * ys[i + 1]) / (b - a);
    }
  }
  return ys[0];
}

}  // namespace specflow::testing

#endif  // SPECFLOW_TESTS_SUPPORT_HPP
