#ifndef SPECFLOW_LIFT_HPP
#define SPECFLOW_LIFT_HPP

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "specflow/rigged.hpp"

namespace specflow {

/// Deterministic parameter path r ↦ S(r) of circle sets on [a, b].
struct SpectrumPath {
  double a = 0.0;
  double b = 1.0;
  std::function<RiggedSet(double)> sampler;
  /// Requires S(a) = ∅, so every argument starts at 0.
  bool starts_at_identity = true;
  /// Optional initial nodes inside (a, b); bisection refines between them.
  std::vector<double> seed_grid;
};

struct LiftOptions {
  double step_tol = 0.1;
  double node_tol = 1e-8;
  int max_depth = 40;
  /// Uniform initial segments when the path has no seed grid.
  int min_segments = 8;
};

/// Continuous real arguments θⱼ(r_k) of a lifted path.
///
/// Row j of `theta()` is track j, column k is grid node r_k. A track sitting
/// exactly on 2πℤ is at the sticky point: before its birth it is 0 and after
/// absorption it stays at the multiple of 2π it reached.
class ArgumentTrack {
 public:
  ArgumentTrack() = default;
  ArgumentTrack(std::vector<double> grid, Eigen::MatrixXd theta, bool starts_at_identity);

  const std::vector<double>& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& theta() const noexcept { return theta_; }
  Eigen::Index tracks() const noexcept { return theta_.rows(); }
  Eigen::Index nodes() const noexcept { return theta_.cols(); }
  bool starts_at_identity() const noexcept { return starts_at_identity_; }

  /// Restriction to grid nodes [first, last].
  ArgumentTrack slice(Eigen::Index first, Eigen::Index last) const;

 private:
  std::vector<double> grid_;
  Eigen::MatrixXd theta_;
  bool starts_at_identity_ = true;
};

/// Whether θ lies on 2πℤ (the lift of the sticky point).
bool on_sticky_lattice(double theta);

/// Adaptive lift: consecutive samples are matched by `distance_d`, each step
/// is bisected until the matching cost is below `step_tol` and every matched
/// displacement is below π/2, then targets are unwrapped next to their
/// sources. Points matched to the sticky point are absorbed at the nearest
/// multiple of 2π; points born from it start next to 0.
///
/// Throws DepthExceeded when bisection reaches `max_depth`, and
/// SamplerInconsistent when a node cannot be reconstructed within `node_tol`
/// or the sampler is not repeatable.
ArgumentTrack lift_path(const SpectrumPath& path, const LiftOptions& options = {});

/// Rigged set of the arguments at node k taken mod 2π, dropping 2πℤ.
RiggedSet project(const ArgumentTrack& track, Eigen::Index k);

/// Σⱼ (θⱼ(b) − θⱼ(a)).
double endpoint_sum(const ArgumentTrack& track);

/// Entry K: max over nodes of Σ|θⱼ| over all tracks but the K largest
/// (tracks ranked by their max |θⱼ|). Length tracks() + 1.
std::vector<double> tail_sums(const ArgumentTrack& track);

}  // namespace specflow

#endif  // SPECFLOW_LIFT_HPP
