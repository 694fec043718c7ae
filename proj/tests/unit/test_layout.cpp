#include <doctest.h>

#include <cmath>

#include "mewl/layout.hpp"

using namespace mewl;

TEST_CASE("layouts respect bounds and minimum distance") {
  Rng rng(5);
  Geometry g;
  for (int i = 0; i < 10000; ++i) {
    int n = 1 + static_cast<int>(rng.below(6));
    auto pts = sample_layout(n, {}, g, rng);
    REQUIRE(pts.size() == static_cast<std::size_t>(n));
    for (std::size_t a = 0; a < pts.size(); ++a) {
      REQUIRE(pts[a].x >= g.border);
      REQUIRE(pts[a].x <= g.arena - g.border);
      REQUIRE(pts[a].y >= g.border);
      REQUIRE(pts[a].y <= g.arena - g.border);
      for (std::size_t b = a + 1; b < pts.size(); ++b) {
        REQUIRE(std::hypot(pts[a].x - pts[b].x, pts[a].y - pts[b].y) >= g.d_min - 1e-9);
      }
    }
  }
}

TEST_CASE("layout constraints hold") {
  Rng rng(9);
  std::vector<LayoutConstraint> cs = {LayoutConstraint::holds(0, 1, Relation::front),
                                      LayoutConstraint::separated(1, 2),
                                      LayoutConstraint::separated(0, 2)};
  for (int i = 0; i < 1000; ++i) {
    auto p = sample_layout(3, cs, {}, rng);
    REQUIRE(relations_between(p[0], p[1]).contains(Relation::front));
    REQUIRE(relations_between(p[1], p[2]).size() == 2);
    REQUIRE(relations_between(p[0], p[2]).size() == 2);
  }
}

TEST_CASE("impossible layouts throw") {
  Rng rng(1);
  Geometry cramped{2.0, 0.8, 1.2, 0.5};
  CHECK_THROWS_AS(sample_layout(6, {}, cramped, rng), LayoutExhausted);
  std::vector<LayoutConstraint> contradictory = {LayoutConstraint::holds(0, 1, Relation::left),
                                                 LayoutConstraint::holds(0, 1, Relation::right)};
  CHECK_THROWS_AS(sample_layout(2, contradictory, {}, rng), LayoutExhausted);
  CHECK_THROWS_AS(sample_layout(7, {}, {}, rng), PreconditionError);
}
