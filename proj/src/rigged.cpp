#include "specflow/rigged.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specflow/error.hpp"

namespace specflow {

const char* to_string(Space space) { return space == Space::circle ? "circle" : "line"; }

namespace {

void require_same_space(const RiggedSet& s, const RiggedSet& t) {
  if (s.space() != t.space()) {
    throw Error(ErrorKind::SpaceMismatch,
                std::string(to_string(s.space())) + " set combined with " + to_string(t.space()) + " set");
  }
}

// Index of the entry equal to x within kPointTol, or -1.
int find_point(std::span<const RiggedPoint> pts, double x) {
  auto it = std::lower_bound(pts.begin(), pts.end(), x - kPointTol,
                             [](const RiggedPoint& p, double v) { return p.x < v; });
  if (it != pts.end() && std::abs(it->x - x) <= kPointTol) return static_cast<int>(it - pts.begin());
  return -1;
}

}  // namespace

RiggedSet::RiggedSet(Space space, std::vector<RiggedPoint> points) : space_(space) {
  for (const auto& p : points) {
    if (p.mult < 1) throw Error(ErrorKind::InvalidArgument, "multiplicity must be positive");
    if (!std::isfinite(p.x)) throw Error(ErrorKind::InvalidArgument, "point must be finite");
    if (space == Space::circle && !(p.x > kPointTol && p.x < kTwoPi - kPointTol)) {
      throw Error(ErrorKind::InvalidArgument, "circle point " + std::to_string(p.x) + " not in (0, 2pi)");
    }
    if (space == Space::line && std::abs(p.x) <= kPointTol) {
      throw Error(ErrorKind::InvalidArgument, "line point must be nonzero");
    }
  }
  std::sort(points.begin(), points.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
  for (const auto& p : points) {
    if (!points_.empty() && p.x - points_.back().x < kPointTol) {
      points_.back().mult += p.mult;
    } else {
      points_.push_back(p);
    }
  }
}

RiggedSet RiggedSet::from_values(Space space, std::span<const double> values) {
  std::vector<RiggedPoint> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back({v, 1});
  return RiggedSet(space, std::move(pts));
}

RiggedSet RiggedSet::from_angles(std::span<const double> angles, double sticky_tol) {
  std::vector<RiggedPoint> pts;
  for (double a : angles) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0) w += kTwoPi;
    if (w <= std::max(sticky_tol, kPointTol) || w >= kTwoPi - std::max(sticky_tol, kPointTol)) continue;
    pts.push_back({w, 1});
  }
  return RiggedSet(Space::circle, std::move(pts));
}

int RiggedSet::rank() const noexcept {
  int r = 0;
  for (const auto& p : points_) r += p.mult;
  return r;
}

std::vector<double> RiggedSet::expanded() const {
  std::vector<double> out;
  out.reserve(rank());
  for (const auto& p : points_) out.insert(out.end(), p.mult, p.x);
  return out;
}

bool operator==(const RiggedSet& a, const RiggedSet& b) {
  if (a.space_ != b.space_ || a.points_.size() != b.points_.size()) return false;
  for (std::size_t i = 0; i < a.points_.size(); ++i) {
    if (a.points_[i].mult != b.points_[i].mult) return false;
    if (std::abs(a.points_[i].x - b.points_[i].x) > kPointTol) return false;
  }
  return true;
}

double sticky_distance(Space space, double x) {
  if (space == Space::line) return std::abs(x);
  double w = std::fmod(std::abs(x), kTwoPi);
  return std::min(w, kTwoPi - w);
}

double point_distance(Space space, double a, double b) {
  const double diff = std::abs(a - b);
  if (space == Space::line) return diff;
  const double w = std::fmod(diff, kTwoPi);
  return std::min(w, kTwoPi - w);
}

bool is_sticky(Space space, double x) { return sticky_distance(space, x) <= kPointTol; }

int mult(const RiggedSet& s, double x) {
  if (is_sticky(s.space(), x)) return kInfiniteMult;
  if (s.space() == Space::circle) {
    x = std::fmod(x, kTwoPi);
    if (x < 0) x += kTwoPi;
  }
  const int i = find_point(s.points(), x);
  return i < 0 ? 0 : s.points()[i].mult;
}

RiggedSet operator+(const RiggedSet& s, const RiggedSet& t) {
  require_same_space(s, t);
  std::vector<RiggedPoint> pts(s.points().begin(), s.points().end());
  pts.insert(pts.end(), t.points().begin(), t.points().end());
  return RiggedSet(s.space(), std::move(pts));
}

bool dominated_by(const RiggedSet& t, const RiggedSet& s) {
  if (t.space() != s.space()) return false;
  for (const auto& p : t.points()) {
    const int i = find_point(s.points(), p.x);
    if (i < 0 || s.points()[i].mult < p.mult) return false;
  }
  return true;
}

RiggedSet difference(const RiggedSet& s, const RiggedSet& t) {
  require_same_space(s, t);
  std::vector<RiggedPoint> pts(s.points().begin(), s.points().end());
  for (const auto& p : t.points()) {
    const int i = find_point(s.points(), p.x);
    if (i < 0 || pts[i].mult < p.mult) {
      throw Error(ErrorKind::DominanceViolation,
                  "point " + std::to_string(p.x) + " has larger multiplicity in the subtrahend");
    }
    pts[i].mult -= p.mult;
  }
  std::erase_if(pts, [](const RiggedPoint& p) { return p.mult == 0; });
  return RiggedSet(s.space(), std::move(pts));
}

RiggedSet truncate_eps(const RiggedSet& s, double eps) {
  if (!(eps > 0)) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
  std::vector<RiggedPoint> pts;
  for (const auto& p : s.points()) {
    if (sticky_distance(s.space(), p.x) < eps) pts.push_back(p);
  }
  return RiggedSet(s.space(), std::move(pts));
}

std::pair<RiggedSet, RiggedSet> pos_neg_parts(const RiggedSet& s) {
  if (s.space() != Space::line) throw Error(ErrorKind::SpaceMismatch, "positive/negative parts need a line set");
  std::vector<RiggedPoint> pos, neg;
  for (const auto& p : s.points()) (p.x > 0 ? pos : neg).push_back(p);
  return {RiggedSet(Space::line, std::move(pos)), RiggedSet(Space::line, std::move(neg))};
}

RiggedSet abs_part(const RiggedSet& s) {
  auto [pos, neg] = pos_neg_parts(s);
  std::vector<RiggedPoint> flipped;
  for (const auto& p : neg.points()) flipped.push_back({-p.x, p.mult});
  return pos + RiggedSet(Space::line, std::move(flipped));
}

StepFunction counting_function(const RiggedSet& s) {
  if (s.space() != Space::circle) throw Error(ErrorKind::SpaceMismatch, "counting function needs a circle set");
  std::vector<StepFunction::Jump> jumps;
  jumps.reserve(s.points().size());
  for (const auto& p : s.points()) jumps.push_back({p.x, -p.mult});
  return StepFunction(0, std::move(jumps));
}

}  // namespace specflow
