#include <numbers>

#include "doctest.h"
#include "specflow/error.hpp"
#include "specflow/matching.hpp"
#include "specflow/rigged.hpp"
#include "support.hpp"

using namespace specflow;
using std::numbers::pi;

namespace {

RiggedSet circle(std::vector<RiggedPoint> pts) { return RiggedSet(Space::circle, std::move(pts)); }
RiggedSet line(std::vector<RiggedPoint> pts) { return RiggedSet(Space::line, std::move(pts)); }

}  // namespace

TEST_CASE("construction validates and merges") {
  CHECK_THROWS_AS(circle({{0.0, 1}}), Error);
  CHECK_THROWS_AS(circle({{kTwoPi, 1}}), Error);
  CHECK_THROWS_AS(circle({{1.0, 0}}), Error);
  CHECK_THROWS_AS(line({{0.0, 1}}), Error);

  auto s = circle({{2.0, 1}, {1.0, 2}, {1.0 + 1e-13, 1}});
  REQUIRE(s.points().size() == 2);
  CHECK(s.points()[0].mult == 3);
  CHECK(s.rank() == 4);
  CHECK(s.expanded() == std::vector<double>{1.0, 1.0, 1.0, 2.0});
}

TEST_CASE("mult") {
  auto s = circle({{pi / 2, 2}});
  CHECK(mult(s, pi / 2) == 2);
  CHECK(mult(s, 0.0) == kInfiniteMult);
  CHECK(mult(s, kTwoPi) == kInfiniteMult);
  CHECK(mult(s, pi / 3) == 0);
  CHECK(mult(s, pi / 2 + kTwoPi) == 2);
  CHECK(mult(line({{-1.0, 3}}), 0.0) == kInfiniteMult);
}

TEST_CASE("sum and difference") {
  CHECK(circle({{pi / 2, 1}}) + circle({{pi / 2, 1}}) == circle({{pi / 2, 2}}));
  auto s = circle({{1.0, 1}, {3.0, 2}});
  CHECK(s + RiggedSet(Space::circle) == s);
  CHECK(circle({{1.0, 1}}) + circle({{2.0, 3}}) == circle({{1.0, 1}, {2.0, 3}}));
  CHECK_THROWS_WITH_AS(circle({{1.0, 1}}) + line({{1.0, 1}}), doctest::Contains("SpaceMismatch"), Error);

  CHECK(circle({{pi / 2, 2}}) - circle({{pi / 2, 1}}) == circle({{pi / 2, 1}}));
  CHECK((s - s).empty());
  try {
    (void)(circle({{1.0, 1}}) - circle({{2.0, 1}}));
    FAIL("expected DominanceViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DominanceViolation);
  }
}

TEST_CASE("truncation") {
  CHECK(truncate_eps(circle({{pi / 2, 1}, {0.01, 3}}), 0.1) == circle({{0.01, 3}}));
  auto s = circle({{1.0, 1}, {3.0, 2}, {6.0, 1}});
  CHECK(truncate_eps(s, kTwoPi) == s);
  CHECK(truncate_eps(RiggedSet(Space::circle), 0.5).empty());
  CHECK_THROWS_AS(truncate_eps(s, 0.0), Error);
  // 6.0 is at arc distance 2π − 6 ≈ 0.283 from 1.
  CHECK(truncate_eps(s, 0.3) == circle({{6.0, 1}}));

  testing::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = testing::random_set(rng, Space::circle, 6);
    auto b = truncate_eps(a, 1.5);  // b ≤ a
    for (double eps : {0.2, 0.9, 2.0}) {
      CHECK(truncate_eps(a - b, eps) == truncate_eps(a, eps) - truncate_eps(b, eps));
    }
  }
}

TEST_CASE("removing the truncated part converges monotonically") {
  // S(ε) collects the points near the sticky point, so S − S(ε) → S as ε → 0.
  testing::Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = testing::random_set(rng, Space::circle, 6);
    double prev = INFINITY;
    for (double eps = 4.0; eps > 1e-3; eps *= 0.7) {
      const auto near = truncate_eps(s, eps);
      const double d = distance_d(s - near, s).cost;
      CHECK(d <= prev + 1e-15);
      CHECK(d <= distance_d(near, RiggedSet(Space::circle)).cost + 1e-15);
      prev = d;
    }
    CHECK(distance_d(s - truncate_eps(s, 1e-3), s).cost == 0.0);
  }
}

TEST_CASE("positive and negative parts") {
  auto [pos, neg] = pos_neg_parts(line({{-1.0, 1}, {2.0, 2}}));
  CHECK(pos == line({{2.0, 2}}));
  CHECK(neg == line({{-1.0, 1}}));
  auto all_pos = line({{0.5, 1}, {3.0, 1}});
  auto [p2, n2] = pos_neg_parts(all_pos);
  CHECK(p2 == all_pos);
  CHECK(n2.empty());
  CHECK(abs_part(line({{-1.0, 1}, {1.0, 1}})) == line({{1.0, 2}}));
  CHECK_THROWS_AS(pos_neg_parts(circle({{1.0, 1}})), Error);

  testing::Rng rng(13);
  const RiggedSet zero(Space::line);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = testing::random_set(rng, Space::line, 7);
    auto [sp, sn] = pos_neg_parts(s);
    CHECK(sp + sn == s);
    CHECK(distance_d(s, zero).cost ==
          doctest::Approx(distance_d(sp, zero).cost + distance_d(sn, zero).cost).epsilon(1e-14));
  }
}

TEST_CASE("counting function") {
  CHECK(counting_function(RiggedSet(Space::circle)).is_constant());
  auto f = counting_function(circle({{pi, 2}}));
  REQUIRE(f.jumps().size() == 1);
  CHECK(f.jumps()[0].at == pi);
  CHECK(f.jumps()[0].delta == -2);
  // Left-continuous: the point itself still counts as "above".
  CHECK(f(pi) == 0);
  CHECK(f(pi + 1e-9) == -2);

  testing::Rng rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    auto s = testing::random_set(rng, Space::circle, 5);
    auto t = testing::random_set(rng, Space::circle, 5);
    CHECK(counting_function(s + t) == counting_function(s) + counting_function(t));
  }
}

TEST_CASE("rho1") {
  auto f = counting_function(circle({{1.0, 1}, {4.0, 3}}));
  CHECK(rho1(f, f) == 0.0);
  CHECK(rho1(f, f + 5) == 0.0);
  CHECK(rho1_shift(f, f + 5) == 5);
  CHECK(f.equiv_mod_const(f + 5));

  testing::Rng rng(15);
  for (int trial = 0; trial < 500; ++trial) {
    auto s = testing::random_set(rng, Space::circle, 6);
    auto t = testing::random_set(rng, Space::circle, 6);
    const auto fs = counting_function(s), ft = counting_function(t);
    CHECK(rho1(fs, ft) == doctest::Approx(testing::rho1_scan(fs, ft)).epsilon(1e-13));
    CHECK(std::abs(rho1(fs, ft) - distance_d(s, t).cost) < 1e-10);
  }
}
