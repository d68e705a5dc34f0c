#ifndef SPECFLOW_UNISPEC_HPP
#define SPECFLOW_UNISPEC_HPP

#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "specflow/rigged.hpp"

namespace specflow {

using Complex = std::complex<double>;

inline constexpr double kUnitarityTol = 1e-10;
inline constexpr double kDefaultClusterTol = 1e-7;

/// Sum of singular values.
template <typename Derived>
double trace_norm(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  if (a.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Plain>(a.eval()).singularValues().sum();
}

/// ‖M*M − I‖ in operator norm.
template <typename Derived>
double unitarity_residual(const Eigen::MatrixBase<Derived>& m) {
  using Plain = typename Derived::PlainObject;
  if (m.size() == 0) return 0.0;
  const Plain defect = m.adjoint() * m - Plain::Identity(m.cols(), m.cols());
  return Eigen::JacobiSVD<Plain>(defect).singularValues()(0);
}

/// e^{irH} for Hermitian H.
template <typename Derived>
Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> expi_hermitian(const Eigen::MatrixBase<Derived>& h, double r) {
  using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h.template cast<Complex>().eval());
  const Eigen::VectorXcd phases = (Complex(0.0, r) * es.eigenvalues().template cast<Complex>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Principal square root of a Hermitian positive semidefinite matrix;
/// eigenvalues in [−clamp, 0) are set to 0, lower ones are rejected.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a, double clamp = 1e-12);

/// Unitary N×N matrix viewed as an element of 1 + trace class (padded by 1).
class UnitaryTC {
 public:
  explicit UnitaryTC(Eigen::MatrixXcd m, double tol = kUnitarityTol);
  static UnitaryTC identity(Eigen::Index n) { return UnitaryTC(Eigen::MatrixXcd::Identity(n, n)); }

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return m_; }

 private:
  Eigen::MatrixXcd m_;
};

/// Eigenvalues projected onto the unit circle with normalized eigenvectors.
/// Contract: residual ‖Mv − λv‖ ≤ 1e-8 per pair, else SolverFailure.
struct UnitaryEigen {
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
};

UnitaryEigen unitary_eigensolve(const UnitaryTC& u);

/// Eigenvalue angles in [0, 2π), unsorted.
Eigen::VectorXd eigen_angles(const UnitaryTC& u);

/// Spectrum as a rigged set: eigenvalues within `cluster_tol` (arc length)
/// of 1 are absorbed into the sticky point, the rest are clustered at
/// `cluster_tol` into points with multiplicity.
RiggedSet spec(const UnitaryTC& u, double cluster_tol = kDefaultClusterTol);

/// π/2 = sup over x ∈ (0, π] of x / |e^{ix} − 1|.
inline constexpr double kArcChordConstant = 1.5707963267948966;

struct ContinuityBound {
  double lhs;  // d(spec U₁, spec U₂)
  double rhs;  // (π/2)‖U₁ − U₂‖₁
};

ContinuityBound spec_continuity_check(const UnitaryTC& u1, const UnitaryTC& u2);

struct VelocityReport {
  double max_deviation;          // max over j of |λⱼ'(fd) − ⟨ψⱼ, U'ψⱼ⟩|
  double velocity_sum;           // Σⱼ |λⱼ'|
  double derivative_trace_norm;  // ‖U'‖₁
};

/// Central differences of step h for both λⱼ(r) and U(r) at r0. Throws
/// DegenerateSpectrum unless the spectrum at r0 is simple.
VelocityReport eigen_velocity_check(const std::function<UnitaryTC(double)>& path, double r0, double h);

}  // namespace specflow

#endif  // SPECFLOW_UNISPEC_HPP
