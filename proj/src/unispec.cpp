#include "specflow/unispec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "specflow/error.hpp"
#include "specflow/matching.hpp"

namespace specflow {

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a, double clamp) {
  if (a.size() == 0) return a;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < -clamp) {
    std::ostringstream msg;
    msg << "matrix not positive semidefinite, eigenvalue " << ev.minCoeff();
    throw Error(ErrorKind::InvariantViolation, msg.str());
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

UnitaryTC::UnitaryTC(Eigen::MatrixXcd m, double tol) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw Error(ErrorKind::DimensionMismatch, "unitary matrix must be square");
  const double res = unitarity_residual(m_);
  if (!(res <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not unitary, residual " << res;
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
}

UnitaryEigen unitary_eigensolve(const UnitaryTC& u) {
  UnitaryEigen out;
  if (u.dim() == 0) return out;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u.matrix());
  if (es.info() != Eigen::Success) throw Error(ErrorKind::SolverFailure, "complex Schur iteration did not converge");
  out.values = es.eigenvalues().array() / es.eigenvalues().array().abs();
  out.vectors = es.eigenvectors().colwise().normalized();
  for (Eigen::Index j = 0; j < u.dim(); ++j) {
    const double res = (u.matrix() * out.vectors.col(j) - out.values(j) * out.vectors.col(j)).norm();
    if (res > 1e-8) {
      std::ostringstream msg;
      msg << "eigenpair residual " << res << " exceeds 1e-8";
      throw Error(ErrorKind::SolverFailure, msg.str());
    }
  }
  return out;
}

Eigen::VectorXd eigen_angles(const UnitaryTC& u) {
  const auto eig = unitary_eigensolve(u);
  Eigen::VectorXd angles(eig.values.size());
  for (Eigen::Index j = 0; j < angles.size(); ++j) {
    const double a = std::arg(eig.values(j));
    angles(j) = a < 0 ? a + kTwoPi : a;
  }
  return angles;
}

RiggedSet spec(const UnitaryTC& u, double cluster_tol) {
  if (!(cluster_tol > 0)) throw Error(ErrorKind::InvalidArgument, "cluster_tol must be positive");
  const Eigen::VectorXd all = eigen_angles(u);
  std::vector<double> angles;
  for (double a : all) {
    if (sticky_distance(Space::circle, a) > cluster_tol) angles.push_back(a);
  }
  std::sort(angles.begin(), angles.end());

  std::vector<RiggedPoint> pts;
  std::size_t i = 0;
  while (i < angles.size()) {
    std::size_t j = i + 1;
    double sum = angles[i];
    while (j < angles.size() && angles[j] - angles[j - 1] <= cluster_tol) sum += angles[j++];
    pts.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return RiggedSet(Space::circle, std::move(pts));
}

ContinuityBound spec_continuity_check(const UnitaryTC& u1, const UnitaryTC& u2) {
  if (u1.dim() != u2.dim()) throw Error(ErrorKind::DimensionMismatch, "unitaries of different dimension");
  return {distance_d(spec(u1), spec(u2)).cost, kArcChordConstant * trace_norm(u1.matrix() - u2.matrix())};
}

VelocityReport eigen_velocity_check(const std::function<UnitaryTC(double)>& path, double r0, double h) {
  if (!(h > 0)) throw Error(ErrorKind::InvalidArgument, "step h must be positive");
  const UnitaryTC u0 = path(r0);
  const UnitaryTC up = path(r0 + h);
  const UnitaryTC um = path(r0 - h);
  const auto e0 = unitary_eigensolve(u0);
  const auto ep = unitary_eigensolve(up);
  const auto em = unitary_eigensolve(um);
  const Eigen::Index n = u0.dim();

  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) gap = std::min(gap, std::abs(e0.values(i) - e0.values(j)));
  }
  if (gap < 1e-6) throw Error(ErrorKind::DegenerateSpectrum, "spectrum at r0 is not simple");

  auto nearest = [](const Eigen::VectorXcd& vals, Complex z) {
    Eigen::Index k;
    (vals.array() - z).abs().minCoeff(&k);
    return vals(k);
  };

  const Eigen::MatrixXcd du = (up.matrix() - um.matrix()) / (2.0 * h);
  VelocityReport rep{0.0, 0.0, trace_norm(du)};
  for (Eigen::Index j = 0; j < n; ++j) {
    const Complex z = e0.values(j);
    const Complex fd = (nearest(ep.values, z) - nearest(em.values, z)) / (2.0 * h);
    const Complex predicted = e0.vectors.col(j).dot(du * e0.vectors.col(j));
    rep.max_deviation = std::max(rep.max_deviation, std::abs(fd - predicted));
    rep.velocity_sum += std::abs(fd);
  }
  return rep;
}

}  // namespace specflow
