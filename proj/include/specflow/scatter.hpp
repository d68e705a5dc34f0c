#ifndef SPECFLOW_SCATTER_HPP
#define SPECFLOW_SCATTER_HPP

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "specflow/lift.hpp"
#include "specflow/mu.hpp"
#include "specflow/unispec.hpp"

namespace specflow {

/// Root ζ of ζ + 1/ζ = z for the free lattice resolvent: |ζ| < 1 off the
/// band, and on the band z = λ + i0 (Im z = 0, |λ| < 2) the boundary value
/// e^{−ik}, λ = 2cos k. Throws BranchFailure at the band edges ±2.
Complex lattice_zeta(Complex z);

/// G(z; m, n) = ((H₀ − z)⁻¹)(m, n) = ζ^{|m−n|} / (ζ − 1/ζ) for the discrete
/// Laplacian (H₀u)(n) = u(n+1) + u(n−1). Real z inside (−2, 2) is read as λ + i0.
Complex lattice_green(Complex z, long m, long n);

/// Free lattice Laplacian coupled through a rank-k frame at `sites` with
/// weights `kappa`; the perturbation along the path is V_r = F*(rJ)F.
struct ScatteringModel {
  std::vector<long> sites;
  std::vector<double> kappa;
  Eigen::MatrixXcd coupling;

  Eigen::Index rank() const noexcept { return static_cast<Eigen::Index>(sites.size()); }
  /// Throws InvalidArgument unless sizes agree, κ > 0 and J = J* within 1e-12.
  void validate() const;

  static ScatteringModel rank_one();
  static ScatteringModel rank_two();
};

/// T₀(z) with entries κᵢκⱼ G(z; nᵢ, nⱼ); checks that Im T₀ is PSD (eigenvalues ≥ −1e-10).
Eigen::MatrixXcd t0(const ScatteringModel& model, Complex z);

/// Smallest singular value of 1 + T₀(z) rJ.
double min_singular_value(const ScatteringModel& model, Complex z, double r);

/// S̃(z, r) = 1 − 2i √Im T₀ · rJ · (1 + T₀ rJ)⁻¹ · √Im T₀. Throws ResonanceHit
/// when 1 + T₀ rJ has a singular value below 1e-10.
UnitaryTC tilde_s(const ScatteringModel& model, Complex z, double r);

struct ResonanceInterval {
  double lo;
  double hi;
  double location() const noexcept { return 0.5 * (lo + hi); }
};

inline constexpr double kResonanceThreshold = 1e-8;

/// Couplings in the span of `r_grid` where the smallest singular value of
/// 1 + T₀(λ+i0) rJ drops below 1e-8, each bracketed to width 1e-10.
std::vector<ResonanceInterval> resonance_scan(const ScatteringModel& model, double lambda,
                                              const std::vector<double>& r_grid);

/// A μ-invariant together with the lifted phases it was computed from.
struct PhaseFlow {
  ArgumentTrack track;
  MuInvariant mu;
};

/// Pushnitski μ: spectral flow of S̃(λ + iy, r) as y runs from ∞ down to 0.
PhaseFlow mu_pushnitski(const ScatteringModel& model, double lambda, double r, const LiftOptions& options = {});

/// Absolutely continuous part: spectral flow of S̃(λ + i0, ρ) for ρ from 0 to r.
/// Throws ResonanceOnPath when [0, r] meets the resonance set.
PhaseFlow mu_ac(const ScatteringModel& model, double lambda, double r, const LiftOptions& options = {});

struct XiDecomposition {
  double lambda = 0.0;
  double r = 0.0;
  double xi = 0.0;
  double xi_ac = 0.0;
  double xi_s = 0.0;
  MuInvariant mu;
  MuInvariant mu_ac;
  double mu_s_value = 0.0;
  double phase_sum = 0.0;          // Σ θⱼ*(λ, r)
  double bk_residual = 0.0;        // |e^{−2πiξ} − det S̃(λ+i0, r)|
  double det_residual = 0.0;       // |det S̃ − Π e^{iθⱼ*}|
  double spectra_distance = 0.0;   // d between the y-route and r-route endpoint spectra
  double unitarity_residual = 0.0;
  double min_singval = 0.0;
};

/// ξ = −∫μ/2π, ξ^(a) = −∫μ^(a)/2π and ξ^(s) = ξ − ξ^(a). Throws
/// ThetaDependence if μ − μ^(a) is not constant off its jump angles, and
/// InvariantViolation if ξ^(s) is not an integer equal to −μ^(s) within 1e-6.
XiDecomposition xi_decompose(const ScatteringModel& model, double lambda, double r, const LiftOptions& options = {});

}  // namespace specflow

#endif  // SPECFLOW_SCATTER_HPP
