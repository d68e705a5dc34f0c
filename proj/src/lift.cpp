#include "specflow/lift.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "specflow/error.hpp"
#include "specflow/matching.hpp"

namespace specflow {

ArgumentTrack::ArgumentTrack(std::vector<double> grid, Eigen::MatrixXd theta, bool starts_at_identity)
    : grid_(std::move(grid)), theta_(std::move(theta)), starts_at_identity_(starts_at_identity) {
  if (static_cast<Eigen::Index>(grid_.size()) != theta_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "track grid and theta columns differ");
  }
}

ArgumentTrack ArgumentTrack::slice(Eigen::Index first, Eigen::Index last) const {
  if (first < 0 || last >= nodes() || first > last) throw Error(ErrorKind::InvalidArgument, "bad slice");
  std::vector<double> g(grid_.begin() + first, grid_.begin() + last + 1);
  const bool starts = first == 0 ? starts_at_identity_ : project(*this, first).empty();
  return ArgumentTrack(std::move(g), theta_.middleCols(first, last - first + 1), starts);
}

bool on_sticky_lattice(double theta) { return theta == kTwoPi * std::round(theta / kTwoPi); }

namespace {

double wrap_angle(double theta) {
  double w = std::fmod(theta, kTwoPi);
  return w < 0 ? w + kTwoPi : w;
}

class Lifter {
 public:
  Lifter(const SpectrumPath& path, const LiftOptions& opt) : path_(path), opt_(opt) {}

  ArgumentTrack run() {
    if (!path_.sampler) throw Error(ErrorKind::InvalidArgument, "path has no sampler");
    if (!(path_.a < path_.b)) throw Error(ErrorKind::InvalidArgument, "path domain must satisfy a < b");
    if (!(opt_.step_tol > 0 && opt_.node_tol > 0 && opt_.max_depth > 0 && opt_.min_segments > 0)) {
      throw Error(ErrorKind::InvalidArgument, "lift tolerances must be positive");
    }

    const RiggedSet start = sample(path_.a);
    check_repeatable(path_.a, start);
    if (path_.starts_at_identity && !start.empty()) {
      throw Error(ErrorKind::SamplerInconsistent, "path flagged to start at identity has S(a) nonempty");
    }
    grid_.push_back(path_.a);
    for (double x : start.expanded()) {
      history_.push_back({x > std::numbers::pi ? x - kTwoPi : x});
    }

    std::vector<double> nodes;
    for (double r : path_.seed_grid) {
      if (r > path_.a && r < path_.b) nodes.push_back(r);
    }
    if (nodes.empty()) {
      for (int i = 1; i < opt_.min_segments; ++i) {
        nodes.push_back(path_.a + (path_.b - path_.a) * i / opt_.min_segments);
      }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    nodes.push_back(path_.b);

    double r0 = path_.a;
    RiggedSet end;
    for (double r1 : nodes) {
      end = sample(r1);
      advance(r0, r1, end, 0);
      r0 = r1;
    }
    check_repeatable(path_.b, end);

    Eigen::MatrixXd theta(static_cast<Eigen::Index>(history_.size()), static_cast<Eigen::Index>(grid_.size()));
    for (std::size_t j = 0; j < history_.size(); ++j) {
      theta.row(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::RowVectorXd>(history_[j].data(), grid_.size());
    }
    return ArgumentTrack(grid_, std::move(theta), path_.starts_at_identity);
  }

 private:
  RiggedSet sample(double r) const {
    RiggedSet s = path_.sampler(r);
    if (s.space() != Space::circle) throw Error(ErrorKind::SpaceMismatch, "lifting needs circle sets");
    return s;
  }

  void check_repeatable(double r, const RiggedSet& s) const {
    if (distance_d(s, sample(r)).cost >= opt_.node_tol) {
      std::ostringstream msg;
      msg << "sampler not repeatable at r = " << r;
      throw Error(ErrorKind::SamplerInconsistent, msg.str());
    }
  }

  void advance(double r0, double r1, const RiggedSet& target, int depth) {
    std::vector<std::size_t> active;
    std::vector<double> src;
    for (std::size_t j = 0; j < history_.size(); ++j) {
      const double th = history_[j].back();
      if (!on_sticky_lattice(th)) {
        active.push_back(j);
        src.push_back(wrap_angle(th));
      }
    }
    const auto dst = target.expanded();
    const auto match = match_points(Space::circle, src, dst);

    // Tentative arguments at r1 for active tracks, then for births.
    std::vector<double> next(active.size());
    double max_step = 0.0;
    for (std::size_t i = 0; i < active.size(); ++i) {
      const double th = history_[active[i]].back();
      const int j = match.target_of_source[i];
      next[i] = j >= 0 ? dst[j] + kTwoPi * std::round((th - dst[j]) / kTwoPi) : kTwoPi * std::round(th / kTwoPi);
      max_step = std::max(max_step, std::abs(next[i] - th));
    }
    std::vector<double> born;
    for (std::size_t j = 0; j < dst.size(); ++j) {
      if (match.source_of_target[j] < 0) {
        born.push_back(dst[j] > std::numbers::pi ? dst[j] - kTwoPi : dst[j]);
        max_step = std::max(max_step, std::abs(born.back()));
      }
    }

    if (!(match.cost < opt_.step_tol && max_step < 0.5 * std::numbers::pi)) {
      if (depth >= opt_.max_depth) {
        std::ostringstream msg;
        msg << "bisection depth " << depth << " reached on [" << r0 << ", " << r1 << "], step cost " << match.cost;
        throw DepthExceeded(r0, r1, msg.str());
      }
      const double mid = 0.5 * (r0 + r1);
      const RiggedSet middle = sample(mid);
      advance(r0, mid, middle, depth + 1);
      advance(mid, r1, target, depth + 1);
      return;
    }

    const std::size_t before = grid_.size();
    for (auto& h : history_) h.push_back(h.back());
    for (std::size_t i = 0; i < active.size(); ++i) history_[active[i]].back() = next[i];
    for (double th : born) {
      std::vector<double> h(before, 0.0);
      h.push_back(th);
      history_.push_back(std::move(h));
    }
    grid_.push_back(r1);

    std::vector<double> now;
    for (const auto& h : history_) now.push_back(h.back());
    if (distance_d(RiggedSet::from_angles(now), target).cost >= opt_.node_tol) {
      std::ostringstream msg;
      msg << "node r = " << r1 << " not reconstructed within node_tol";
      throw Error(ErrorKind::SamplerInconsistent, msg.str());
    }
  }

  const SpectrumPath& path_;
  const LiftOptions& opt_;
  std::vector<double> grid_;
  std::vector<std::vector<double>> history_;
};

}  // namespace

ArgumentTrack lift_path(const SpectrumPath& path, const LiftOptions& options) {
  return Lifter(path, options).run();
}

RiggedSet project(const ArgumentTrack& track, Eigen::Index k) {
  if (k < 0 || k >= track.nodes()) throw Error(ErrorKind::InvalidArgument, "grid index out of range");
  std::vector<double> angles;
  angles.reserve(track.tracks());
  for (Eigen::Index j = 0; j < track.tracks(); ++j) {
    const double th = track.theta()(j, k);
    if (!on_sticky_lattice(th)) angles.push_back(th);
  }
  return RiggedSet::from_angles(angles);
}

double endpoint_sum(const ArgumentTrack& track) {
  if (track.nodes() == 0) return 0.0;
  return (track.theta().col(track.nodes() - 1) - track.theta().col(0)).sum();
}

std::vector<double> tail_sums(const ArgumentTrack& track) {
  const Eigen::MatrixXd mag = track.theta().cwiseAbs();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(track.tracks()));
  for (Eigen::Index j = 0; j < track.tracks(); ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return mag.row(x).maxCoeff() > mag.row(y).maxCoeff();
  });
  std::vector<double> out;
  for (std::size_t k = 0; k <= order.size(); ++k) {
    Eigen::RowVectorXd tail = Eigen::RowVectorXd::Zero(track.nodes());
    for (std::size_t j = k; j < order.size(); ++j) tail += mag.row(order[j]);
    out.push_back(track.nodes() == 0 ? 0.0 : tail.maxCoeff());
  }
  return out;
}

}  // namespace specflow
