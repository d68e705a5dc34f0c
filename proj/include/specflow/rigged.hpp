#ifndef SPECFLOW_RIGGED_HPP
#define SPECFLOW_RIGGED_HPP

#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "specflow/step_function.hpp"

namespace specflow {

/// Circle points are angles in (0, 2π) with sticky point 1 (angle 0);
/// line points are nonzero reals with sticky point 0.
enum class Space { circle, line };

const char* to_string(Space space);

inline constexpr int kInfiniteMult = std::numeric_limits<int>::max();

/// Points closer than this are the same point.
inline constexpr double kPointTol = 1e-12;

struct RiggedPoint {
  double x;
  int mult;
};

/// Finite-rank multiset on the circle or the line. The sticky point carries
/// infinite multiplicity implicitly and is never stored.
class RiggedSet {
 public:
  explicit RiggedSet(Space space = Space::circle) : space_(space) {}

  /// Sorts and merges the points; rejects sticky or out-of-range points and
  /// nonpositive multiplicities.
  RiggedSet(Space space, std::vector<RiggedPoint> points);

  /// One entry of multiplicity 1 per value.
  static RiggedSet from_values(Space space, std::span<const double> values);

  /// Reduces arbitrary real angles mod 2π and drops those within `sticky_tol` of 1.
  static RiggedSet from_angles(std::span<const double> angles, double sticky_tol = kPointTol);

  Space space() const noexcept { return space_; }
  std::span<const RiggedPoint> points() const noexcept { return points_; }
  bool empty() const noexcept { return points_.empty(); }
  int rank() const noexcept;

  /// Every point repeated by its multiplicity, ascending.
  std::vector<double> expanded() const;

  friend bool operator==(const RiggedSet& a, const RiggedSet& b);

 private:
  Space space_;
  std::vector<RiggedPoint> points_;
};

/// Distance of a point to the sticky point: arc length to angle 0 or |x|.
double sticky_distance(Space space, double x);

/// Geodesic distance; on the circle min(|a−b|, 2π−|a−b|).
double point_distance(Space space, double a, double b);

bool is_sticky(Space space, double x);

/// `kInfiniteMult` at the sticky point, the stored multiplicity, or 0.
int mult(const RiggedSet& s, double x);

RiggedSet operator+(const RiggedSet& s, const RiggedSet& t);

/// S − T; throws DominanceViolation unless T ≤ S pointwise.
RiggedSet difference(const RiggedSet& s, const RiggedSet& t);
inline RiggedSet operator-(const RiggedSet& s, const RiggedSet& t) { return difference(s, t); }

/// Pointwise multiplicity order T ≤ S.
bool dominated_by(const RiggedSet& t, const RiggedSet& s);

/// S(ε): the points at sticky distance < ε.
RiggedSet truncate_eps(const RiggedSet& s, double eps);

/// (S₊, S₋) of a line set.
std::pair<RiggedSet, RiggedSet> pos_neg_parts(const RiggedSet& s);

/// |S| = S₊ + (−S₋).
RiggedSet abs_part(const RiggedSet& s);

/// f_S: jumps by −mult(s) at every point s, value 0 just right of 0.
StepFunction counting_function(const RiggedSet& s);

}  // namespace specflow

#endif  // SPECFLOW_RIGGED_HPP
