#include "specflow/scatter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specflow/error.hpp"
#include "specflow/matching.hpp"

namespace specflow {

Complex lattice_zeta(Complex z) {
  if (z.imag() == 0.0) {
    const double lambda = z.real();
    if (std::abs(std::abs(lambda) - 2.0) <= 1e-12) {
      std::ostringstream msg;
      msg << "lambda = " << lambda << " is a band edge";
      throw Error(ErrorKind::BranchFailure, msg.str());
    }
    if (std::abs(lambda) < 2.0) return std::polar(1.0, -std::acos(0.5 * lambda));
    const double big = 0.5 * (lambda + std::copysign(std::sqrt(lambda * lambda - 4.0), lambda));
    return 1.0 / big;
  }
  const Complex s = std::sqrt(z * z - 4.0);
  Complex big = 0.5 * (z + s);
  if (std::abs(0.5 * (z - s)) > std::abs(big)) big = 0.5 * (z - s);
  const Complex small = 1.0 / big;
  // On Im z > 0 the decaying root lies in the lower half plane.
  const bool want_lower = z.imag() > 0.0;
  return (small.imag() < 0.0) == want_lower ? small : big;
}

Complex lattice_green(Complex z, long m, long n) {
  const Complex zeta = lattice_zeta(z);
  return std::pow(zeta, static_cast<int>(std::labs(m - n))) / (zeta - 1.0 / zeta);
}

void ScatteringModel::validate() const {
  const auto k = static_cast<Eigen::Index>(sites.size());
  if (k == 0) throw Error(ErrorKind::InvalidArgument, "model needs at least one site");
  if (static_cast<Eigen::Index>(kappa.size()) != k) throw Error(ErrorKind::InvalidArgument, "kappa size differs from sites");
  if (coupling.rows() != k || coupling.cols() != k) throw Error(ErrorKind::InvalidArgument, "J must be k x k");
  for (double w : kappa) {
    if (!(w > 0)) throw Error(ErrorKind::InvalidArgument, "frame weights must be positive");
  }
  if ((coupling - coupling.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "J must be Hermitian");
  }
}

ScatteringModel ScatteringModel::rank_one() {
  return {{0}, {1.0}, Eigen::MatrixXcd::Ones(1, 1)};
}

ScatteringModel ScatteringModel::rank_two() {
  Eigen::MatrixXcd j(2, 2);
  j << 1.0, 0.4, 0.4, -0.6;
  return {{0, 1}, {1.0, 0.7}, j};
}

Eigen::MatrixXcd t0(const ScatteringModel& model, Complex z) {
  model.validate();
  const Eigen::Index k = model.rank();
  Eigen::MatrixXcd m(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      m(i, j) = model.kappa[i] * model.kappa[j] * lattice_green(z, model.sites[i], model.sites[j]);
    }
  }
  const Eigen::MatrixXcd im = (m - m.adjoint()) / Complex(0.0, 2.0);
  const double lowest = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(im, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (lowest < -1e-10) {
    std::ostringstream msg;
    msg << "Im T0 has eigenvalue " << lowest << " at z = " << z;
    throw Error(ErrorKind::InvariantViolation, msg.str());
  }
  return m;
}

namespace {

Eigen::MatrixXcd one_plus_tj(const Eigen::MatrixXcd& t, const ScatteringModel& model, double r) {
  return Eigen::MatrixXcd::Identity(t.rows(), t.cols()) + t * (r * model.coupling);
}

double smallest_singular(const Eigen::MatrixXcd& a) {
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(a).singularValues().minCoeff();
}

}  // namespace

double min_singular_value(const ScatteringModel& model, Complex z, double r) {
  return smallest_singular(one_plus_tj(t0(model, z), model, r));
}

UnitaryTC tilde_s(const ScatteringModel& model, Complex z, double r) {
  const Eigen::MatrixXcd t = t0(model, z);
  const Eigen::MatrixXcd a = one_plus_tj(t, model, r);
  const double sigma = smallest_singular(a);
  if (sigma < 1e-10) {
    std::ostringstream msg;
    msg << "1 + T0 J_r is singular (sigma_min = " << sigma << ") at z = " << z << ", r = " << r;
    throw Error(ErrorKind::ResonanceHit, msg.str());
  }
  const Eigen::MatrixXcd q = psd_sqrt((t - t.adjoint()) / Complex(0.0, 2.0));
  const Eigen::Index k = t.rows();
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Identity(k, k) -
                       Complex(0.0, 2.0) * q * (r * model.coupling) * a.partialPivLu().solve(q);
  return UnitaryTC(std::move(s), 1e-8);
}

std::vector<ResonanceInterval> resonance_scan(const ScatteringModel& model, double lambda,
                                              const std::vector<double>& r_grid) {
  std::vector<double> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<ResonanceInterval> found;
  if (grid.empty()) return found;

  const Complex z(lambda, 0.0);
  auto sigma = [&](double r) { return min_singular_value(model, z, r); };
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = sigma(grid[i]);
  if (grid.size() == 1) {
    if (values[0] < kResonanceThreshold) found.push_back({grid[0], grid[0]});
    return found;
  }

  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == grid.size() || values[i] <= values[i + 1];
    if (!(left_ok && right_ok)) continue;
    // Golden-section search for the dip around grid[i].
    double lo = grid[i == 0 ? 0 : i - 1];
    double hi = grid[std::min(i + 1, grid.size() - 1)];
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = sigma(x1), f2 = sigma(x2);
    while (hi - lo > 1e-10) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = sigma(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = sigma(x2);
      }
    }
    if (std::min({f1, f2, sigma(0.5 * (lo + hi))}) < kResonanceThreshold) {
      if (found.empty() || lo > found.back().hi + 1e-9) found.push_back({lo, hi});
    }
  }
  return found;
}

namespace {

constexpr double kYFloor = 1e-8;

// Path parameter s on [0, n + 2]: s = 0 is y = ∞ (S̃ = 1), (0, 1] maps to
// y = y_start/s, [1, n + 1] halves y per unit down to y_start·2^{−n} ≤ 1e-8,
// and the last unit runs linearly to y = 0.
struct ImaginaryAxisPath {
  double y_start;
  int halvings;

  double end() const { return halvings + 2.0; }

  double y(double s) const {
    if (s <= 1.0) return y_start / s;
    if (s <= halvings + 1.0) return y_start * std::exp2(-(s - 1.0));
    return y_start * std::exp2(-halvings) * (end() - s);
  }
};

}  // namespace

PhaseFlow mu_pushnitski(const ScatteringModel& model, double lambda, double r, const LiftOptions& options) {
  model.validate();
  double y_start = 1.0;
  auto far_from_one = [&](double y) {
    const UnitaryTC s = tilde_s(model, Complex(lambda, y), r);
    return trace_norm(s.matrix() - Eigen::MatrixXcd::Identity(s.dim(), s.dim())) >= 0.01;
  };
  for (int i = 0; i < 200 && far_from_one(y_start); ++i) y_start *= 2.0;

  const ImaginaryAxisPath axis{y_start, static_cast<int>(std::ceil(std::log2(y_start / kYFloor)))};
  SpectrumPath path;
  path.a = 0.0;
  path.b = axis.end();
  path.starts_at_identity = true;
  path.sampler = [&model, lambda, r, axis](double s) {
    if (s <= 0.0) return RiggedSet(Space::circle);
    const double y = s >= axis.end() ? 0.0 : axis.y(s);
    return spec(tilde_s(model, Complex(lambda, y), r));
  };
  for (int i = 1; i <= axis.halvings + 1; ++i) path.seed_grid.push_back(i);

  PhaseFlow flow;
  flow.track = lift_path(path, options);
  flow.mu = mu_invariant(flow.track);
  return flow;
}

PhaseFlow mu_ac(const ScatteringModel& model, double lambda, double r, const LiftOptions& options) {
  model.validate();
  if (r != 0.0) {
    std::vector<double> grid(65);
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = r * static_cast<double>(i) / 64.0;
    const auto res = resonance_scan(model, lambda, grid);
    if (!res.empty()) {
      std::ostringstream msg;
      msg << "coupling path [0, " << r << "] meets the resonance set near r* = " << res.front().location();
      throw ResonanceOnPath(res.front().location(), msg.str());
    }
  }
  SpectrumPath path;
  path.a = 0.0;
  path.b = 1.0;
  path.starts_at_identity = true;
  path.sampler = [&model, lambda, r](double t) { return spec(tilde_s(model, Complex(lambda, 0.0), t * r)); };

  PhaseFlow flow;
  flow.track = lift_path(path, options);
  flow.mu = mu_invariant(flow.track);
  return flow;
}

XiDecomposition xi_decompose(const ScatteringModel& model, double lambda, double r, const LiftOptions& options) {
  const PhaseFlow full = mu_pushnitski(model, lambda, r, options);
  const PhaseFlow ac = mu_ac(model, lambda, r, options);

  XiDecomposition out;
  out.lambda = lambda;
  out.r = r;
  out.mu = full.mu;
  out.mu_ac = ac.mu;
  out.xi = -mu_integral(full.mu) / kTwoPi;
  out.xi_ac = -mu_integral(ac.mu) / kTwoPi;
  out.xi_s = out.xi - out.xi_ac;
  out.phase_sum = endpoint_sum(ac.track);

  // μ − μ^(a) must be constant on every piece that is not squeezed between
  // the nearly coincident jump angles of the two routes.
  const StepFunction singular = full.mu.values - ac.mu.values;
  int lo = std::numeric_limits<int>::max(), hi = std::numeric_limits<int>::min();
  double longest = -1.0;
  for (const auto& p : singular.pieces()) {
    if (p.to - p.from < 1e-6) continue;
    lo = std::min(lo, p.value);
    hi = std::max(hi, p.value);
    if (p.to - p.from > longest) {
      longest = p.to - p.from;
      out.mu_s_value = p.value;
    }
  }
  if (hi - lo != 0) {
    std::ostringstream msg;
    msg << "mu - mu_ac ranges over [" << lo << ", " << hi << "] at lambda = " << lambda << ", r = " << r;
    throw Error(ErrorKind::ThetaDependence, msg.str());
  }

  const UnitaryTC s = tilde_s(model, Complex(lambda, 0.0), r);
  const Complex det = s.matrix().determinant();
  out.bk_residual = std::abs(std::exp(Complex(0.0, -kTwoPi * out.xi)) - det);
  out.det_residual = std::abs(det - std::exp(Complex(0.0, out.phase_sum)));
  out.spectra_distance =
      distance_d(project(full.track, full.track.nodes() - 1), project(ac.track, ac.track.nodes() - 1)).cost;
  out.unitarity_residual = unitarity_residual(s.matrix());
  out.min_singval = min_singular_value(model, Complex(lambda, 0.0), r);

  if (std::abs(out.xi_s - std::round(out.xi_s)) >= 1e-6 || std::abs(out.xi_s + out.mu_s_value) >= 1e-6) {
    std::ostringstream msg;
    msg << "xi_s = " << out.xi_s << " is not the integer -mu_s = " << -out.mu_s_value;
    throw Error(ErrorKind::InvariantViolation, msg.str());
  }
  return out;
}

}  // namespace specflow
