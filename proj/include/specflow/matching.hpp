#ifndef SPECFLOW_MATCHING_HPP
#define SPECFLOW_MATCHING_HPP

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "specflow/rigged.hpp"

namespace specflow {

/// Minimum-cost perfect assignment of a square cost matrix by shortest
/// augmenting paths with dual potentials, O(n³). Entry i of the result is
/// the column assigned to row i.
std::vector<int> solve_assignment(const Eigen::MatrixXd& cost);

/// Optimal sticky-padded matching of two expanded point lists.
/// `target_of_source[i]` is an index into `targets` or -1 for the sticky
/// point; likewise `source_of_target`.
struct PointAssignment {
  double cost = 0.0;
  std::vector<int> target_of_source;
  std::vector<int> source_of_target;
};

PointAssignment match_points(Space space, std::span<const double> sources, std::span<const double> targets);

/// One matched pair; an empty side stands for the sticky point.
struct MatchedPair {
  std::optional<double> source;
  std::optional<double> target;
  double cost;
};

struct MatchingResult {
  double cost = 0.0;
  std::vector<MatchedPair> pairs;
};

/// d(S, T): infimum over enumerations of Σ|sⱼ − tⱼ|, solved as an assignment
/// where each side is padded with the other side's rank in sticky copies.
MatchingResult distance_d(const RiggedSet& s, const RiggedSet& t);

inline constexpr int kBruteForceLimit = 8;

/// Exhaustive minimum over all permutations of the padded lists; throws
/// SizeLimit when rank(S) + rank(T) exceeds `kBruteForceLimit`.
double brute_force_d(const RiggedSet& s, const RiggedSet& t);

/// Whether some pair of increasing (sticky-padded, cyclically rotated)
/// enumerations of circle sets reaches d(S, T) within 1e-10.
bool monotone_matching_check(const RiggedSet& s, const RiggedSet& t);

}  // namespace specflow

#endif  // SPECFLOW_MATCHING_HPP
