#ifndef SPECFLOW_MU_HPP
#define SPECFLOW_MU_HPP

#include "specflow/lift.hpp"
#include "specflow/rigged.hpp"
#include "specflow/step_function.hpp"

namespace specflow {

/// Net anticlockwise crossings of e^{iθ} while e^{it} runs from t = th1 to
/// t = th2; arrivals at and departures from θ count one half each.
double crossing_count(double theta, double th1, double th2);

/// Spectral flow of a lifted path through each angle of (0, 2π).
///
/// `values` is the integer value off the endpoint angles; at a jump angle
/// the invariant is the mean of the one-sided limits.
struct MuInvariant {
  StepFunction values;
  RiggedSet start;
  RiggedSet end;

  double operator()(double theta) const { return values.mean(theta); }
  int twice_value(double theta) const { return values.twice_mean(theta); }
};

/// Σⱼ [θ; θⱼ(a), θⱼ(b)] over all tracks, represented exactly.
MuInvariant mu_invariant(const ArgumentTrack& track);

/// μ over [a, c] followed by μ over [c, b]; throws JunctionMismatch when the
/// inner endpoint sets differ by more than 1e-8.
MuInvariant mu_concat(const MuInvariant& first, const MuInvariant& second);

/// ∫₀^{2π} μ(θ) dθ.
inline double mu_integral(const MuInvariant& m) { return m.values.integral(); }

/// Winding number of a loop based at the identity. Throws NotALoop when an
/// endpoint set is nonempty and NonConstant when μ is not constant.
int loop_constancy_check(const ArgumentTrack& track);

}  // namespace specflow

#endif  // SPECFLOW_MU_HPP
