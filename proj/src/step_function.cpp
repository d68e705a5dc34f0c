#include "specflow/step_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "specflow/error.hpp"

namespace specflow {

StepFunction::StepFunction(int base, std::vector<Jump> jumps) : base_(base), jumps_(std::move(jumps)) {
  for (const auto& j : jumps_) {
    if (!(j.at > 0.0 && j.at < kTwoPi)) {
      throw Error(ErrorKind::InvalidArgument, "step function jump outside (0, 2pi)");
    }
  }
  normalize();
}

void StepFunction::normalize() {
  std::stable_sort(jumps_.begin(), jumps_.end(), [](const Jump& a, const Jump& b) { return a.at < b.at; });
  std::vector<Jump> merged;
  merged.reserve(jumps_.size());
  for (const auto& j : jumps_) {
    if (!merged.empty() && j.at - merged.back().at < kMergeTol) {
      merged.back().delta += j.delta;
    } else {
      merged.push_back(j);
    }
  }
  std::erase_if(merged, [](const Jump& j) { return j.delta == 0; });
  jumps_ = std::move(merged);
}

int StepFunction::left_limit(double theta) const {
  int v = base_;
  for (const auto& j : jumps_) {
    if (j.at < theta - kMergeTol) v += j.delta;
    else break;
  }
  return v;
}

int StepFunction::right_limit(double theta) const {
  int v = base_;
  for (const auto& j : jumps_) {
    if (j.at <= theta + kMergeTol) v += j.delta;
    else break;
  }
  return v;
}

std::vector<StepFunction::Piece> StepFunction::pieces() const {
  std::vector<Piece> out;
  out.reserve(jumps_.size() + 1);
  double from = 0.0;
  int value = base_;
  for (const auto& j : jumps_) {
    out.push_back({from, j.at, value});
    from = j.at;
    value += j.delta;
  }
  out.push_back({from, kTwoPi, value});
  return out;
}

double StepFunction::integral() const {
  double s = 0.0;
  for (const auto& p : pieces()) s += p.value * (p.to - p.from);
  return s;
}

int StepFunction::min_value() const {
  int v = base_, m = base_;
  for (const auto& j : jumps_) m = std::min(m, v += j.delta);
  return m;
}

int StepFunction::max_value() const {
  int v = base_, m = base_;
  for (const auto& j : jumps_) m = std::max(m, v += j.delta);
  return m;
}

bool StepFunction::equiv_mod_const(const StepFunction& other) const {
  if (jumps_.size() != other.jumps_.size()) return false;
  for (std::size_t i = 0; i < jumps_.size(); ++i) {
    if (jumps_[i].delta != other.jumps_[i].delta) return false;
    if (std::abs(jumps_[i].at - other.jumps_[i].at) >= kMergeTol) return false;
  }
  return true;
}

bool operator==(const StepFunction& a, const StepFunction& b) {
  return a.base_ == b.base_ && a.equiv_mod_const(b);
}

StepFunction StepFunction::operator-() const {
  StepFunction out = *this;
  out.base_ = -base_;
  for (auto& j : out.jumps_) j.delta = -j.delta;
  return out;
}

StepFunction& StepFunction::operator+=(const StepFunction& other) {
  base_ += other.base_;
  jumps_.insert(jumps_.end(), other.jumps_.begin(), other.jumps_.end());
  normalize();
  return *this;
}

StepFunction& StepFunction::operator-=(const StepFunction& other) { return *this += -other; }

int rho1_shift(const StepFunction& f, const StepFunction& g) {
  // ∫|h + n| is convex piecewise linear in n; a weighted median of −h minimizes it.
  auto pieces = (g - f).pieces();
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) { return a.value < b.value; });
  double acc = 0.0;
  for (const auto& p : pieces) {
    acc += p.to - p.from;
    if (acc >= 0.5 * kTwoPi) return p.value;
  }
  return pieces.back().value;
}

double rho1(const StepFunction& f, const StepFunction& g) {
  const int n = rho1_shift(f, g);
  double s = 0.0;
  for (const auto& p : (f - g).pieces()) s += std::abs(p.value + n) * (p.to - p.from);
  return s;
}

}  // namespace specflow
