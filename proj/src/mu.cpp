#include "specflow/mu.hpp"

#include <cmath>

#include "specflow/error.hpp"
#include "specflow/matching.hpp"

namespace specflow {

namespace {

constexpr double kIntegerSnap = 1e-12;

double snap(double x) {
  const double n = std::round(x);
  return std::abs(x - n) <= kIntegerSnap ? n : x;
}

// t ↦ ceil((t − θ)/2π) as a function of θ ∈ (0, 2π): with t = 2πq + ρ it is
// q + 1 below ρ and q above; constant q when t ∈ 2πℤ.
StepFunction winding_profile(double t) {
  const double turns = snap(t / kTwoPi);
  const double q = std::floor(turns);
  const double rho = t - kTwoPi * q;
  if (turns == q || on_sticky_lattice(t) || rho <= kPointTol || rho >= kTwoPi - kPointTol) {
    return StepFunction(static_cast<int>(std::round(turns)));
  }
  return StepFunction(static_cast<int>(q) + 1, {{rho, -1}});
}

}  // namespace

double crossing_count(double theta, double th1, double th2) {
  if (th1 == th2) return 0.0;
  if (th2 < th1) return -crossing_count(theta, th2, th1);
  const double lo = snap((th1 - theta) / kTwoPi);
  const double hi = snap((th2 - theta) / kTwoPi);
  const double strict = std::ceil(hi) - std::floor(lo) - 1.0;
  const double closed = std::floor(hi) - std::ceil(lo) + 1.0;
  return 0.5 * (std::max(strict, 0.0) + std::max(closed, 0.0));
}

MuInvariant mu_invariant(const ArgumentTrack& track) {
  MuInvariant m{StepFunction(0), RiggedSet(Space::circle), RiggedSet(Space::circle)};
  if (track.nodes() == 0) return m;
  const Eigen::Index last = track.nodes() - 1;
  for (Eigen::Index j = 0; j < track.tracks(); ++j) {
    m.values += winding_profile(track.theta()(j, last));
    m.values -= winding_profile(track.theta()(j, 0));
  }
  m.start = project(track, 0);
  m.end = project(track, last);
  return m;
}

MuInvariant mu_concat(const MuInvariant& first, const MuInvariant& second) {
  if (distance_d(first.end, second.start).cost > 1e-8) {
    throw Error(ErrorKind::JunctionMismatch, "end set of the first path differs from start set of the second");
  }
  return {first.values + second.values, first.start, second.end};
}

int loop_constancy_check(const ArgumentTrack& track) {
  const MuInvariant m = mu_invariant(track);
  if (!m.start.empty() || !m.end.empty()) throw Error(ErrorKind::NotALoop, "path does not start and end at 1");
  if (!m.values.is_constant()) {
    throw Error(ErrorKind::NonConstant, "mu of a loop has jumps; tracking failed");
  }
  return m.values.base();
}

}  // namespace specflow
