#include "specflow/matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "specflow/error.hpp"

namespace specflow {

std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw Error(ErrorKind::DimensionMismatch, "assignment needs a square cost matrix");
  if (n == 0) return {};
  constexpr double inf = std::numeric_limits<double>::infinity();

  // 1-based with a virtual column 0 holding the row being inserted.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> row_of(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    row_of[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = row_of[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[row_of[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (row_of[j0] != 0);
    do {
      const int j1 = way[j0];
      row_of[j0] = row_of[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> col_of(n);
  for (int j = 1; j <= n; ++j) col_of[row_of[j] - 1] = j - 1;
  return col_of;
}

namespace {

// Padded cost matrix: rows are sources then |targets| sticky copies, columns
// are targets then |sources| sticky copies.
Eigen::MatrixXd padded_cost(Space space, std::span<const double> src, std::span<const double> dst) {
  const auto m = static_cast<Eigen::Index>(src.size());
  const auto k = static_cast<Eigen::Index>(dst.size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + k, m + k);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) c(i, j) = point_distance(space, src[i], dst[j]);
    c.row(i).tail(m).setConstant(sticky_distance(space, src[i]));
  }
  for (Eigen::Index j = 0; j < k; ++j) c.col(j).tail(k).setConstant(sticky_distance(space, dst[j]));
  return c;
}

// Sum of pair costs in ascending order so equal cost multisets give equal sums.
double ordered_sum(std::vector<double> costs) {
  std::sort(costs.begin(), costs.end());
  return std::accumulate(costs.begin(), costs.end(), 0.0);
}

bool lexicographically_less(const RiggedSet& a, const RiggedSet& b) {
  const auto pa = a.points();
  const auto pb = b.points();
  return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end(),
                                      [](const RiggedPoint& x, const RiggedPoint& y) {
                                        return x.x < y.x || (x.x == y.x && x.mult < y.mult);
                                      });
}

}  // namespace

PointAssignment match_points(Space space, std::span<const double> sources, std::span<const double> targets) {
  const int m = static_cast<int>(sources.size());
  const int k = static_cast<int>(targets.size());
  const auto col_of = solve_assignment(padded_cost(space, sources, targets));

  PointAssignment out;
  out.target_of_source.assign(m, -1);
  out.source_of_target.assign(k, -1);
  std::vector<double> costs;
  for (int i = 0; i < m + k; ++i) {
    const int j = col_of[i];
    const bool real_src = i < m;
    const bool real_dst = j < k;
    if (real_src && real_dst) {
      out.target_of_source[i] = j;
      out.source_of_target[j] = i;
      costs.push_back(point_distance(space, sources[i], targets[j]));
    } else if (real_src) {
      costs.push_back(sticky_distance(space, sources[i]));
    } else if (real_dst) {
      costs.push_back(sticky_distance(space, targets[j]));
    }
  }
  out.cost = ordered_sum(std::move(costs));
  return out;
}

MatchingResult distance_d(const RiggedSet& s, const RiggedSet& t) {
  if (s.space() != t.space()) throw Error(ErrorKind::SpaceMismatch, "distance between sets of different spaces");
  // Solve in a canonical orientation so d(S, T) and d(T, S) agree bit for bit.
  if (lexicographically_less(t, s)) {
    auto r = distance_d(t, s);
    for (auto& p : r.pairs) std::swap(p.source, p.target);
    return r;
  }
  const auto src = s.expanded();
  const auto dst = t.expanded();
  const auto a = match_points(s.space(), src, dst);

  MatchingResult out;
  out.cost = a.cost;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const int j = a.target_of_source[i];
    if (j >= 0) out.pairs.push_back({src[i], dst[j], point_distance(s.space(), src[i], dst[j])});
    else out.pairs.push_back({src[i], std::nullopt, sticky_distance(s.space(), src[i])});
  }
  for (std::size_t j = 0; j < dst.size(); ++j) {
    if (a.source_of_target[j] < 0) out.pairs.push_back({std::nullopt, dst[j], sticky_distance(s.space(), dst[j])});
  }
  return out;
}

double brute_force_d(const RiggedSet& s, const RiggedSet& t) {
  if (s.space() != t.space()) throw Error(ErrorKind::SpaceMismatch, "distance between sets of different spaces");
  if (s.rank() + t.rank() > kBruteForceLimit) {
    throw Error(ErrorKind::SizeLimit, "brute force limited to rank(S) + rank(T) <= 8");
  }
  const auto c = padded_cost(s.space(), s.expanded(), t.expanded());
  const int n = static_cast<int>(c.rows());
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<double> costs(n);
    for (int i = 0; i < n; ++i) costs[i] = c(i, perm[i]);
    best = std::min(best, ordered_sum(std::move(costs)));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return n == 0 ? 0.0 : best;
}

bool monotone_matching_check(const RiggedSet& s, const RiggedSet& t) {
  if (s.space() != Space::circle || t.space() != Space::circle) {
    throw Error(ErrorKind::SpaceMismatch, "monotone matching is defined for circle sets");
  }
  const double d = distance_d(s, t).cost;
  // Increasing enumerations: sticky copies at angle 0 followed by the points in order.
  auto padded = [](const RiggedSet& a, int copies) {
    std::vector<double> out(copies, 0.0);
    const auto e = a.expanded();
    out.insert(out.end(), e.begin(), e.end());
    return out;
  };
  const auto a = padded(s, t.rank());
  const auto b = padded(t, s.rank());
  const std::size_t n = a.size();
  if (n == 0) return true;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t shift = 0; shift < n; ++shift) {
    std::vector<double> costs(n);
    for (std::size_t i = 0; i < n; ++i) costs[i] = point_distance(Space::circle, a[i], b[(i + shift) % n]);
    best = std::min(best, ordered_sum(std::move(costs)));
  }
  return std::abs(best - d) <= 1e-10;
}

}  // namespace specflow
