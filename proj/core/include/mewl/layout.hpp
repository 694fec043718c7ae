#pragma once

#include <span>
#include <vector>

#include "mewl/core.hpp"
#include "mewl/rng.hpp"

namespace mewl {

// A requirement on two of the positions being laid out.
struct LayoutConstraint {
  enum class Kind { relation, both_axes };

  Kind kind = Kind::relation;
  int a = 0;
  int b = 1;
  Relation relation = Relation::left;  // used when kind == relation

  // `relation` must hold for (a, b) with margin.
  static LayoutConstraint holds(int a, int b, Relation r) { return {Kind::relation, a, b, r}; }
  // a and b must be separated by the margin on both axes.
  static LayoutConstraint separated(int a, int b) {
    return {Kind::both_axes, a, b, Relation::left};
  }
};

inline constexpr int kLayoutMaxRestarts = 2000;

// n positions inside the arena border, pairwise at least d_min apart, every
// constraint satisfied. Coordinates are rounded to 0.01 before checking so
// serialized scenes keep their relations. Throws LayoutExhausted.
std::vector<Point> sample_layout(int n, std::span<const LayoutConstraint> constraints,
                                 const Geometry& geometry, Rng& rng);

}  // namespace mewl
