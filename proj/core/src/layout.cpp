#include "mewl/layout.hpp"

#include <algorithm>
#include <cmath>

namespace mewl {
namespace {

double round_centi(double v) { return std::round(v * 100.0) / 100.0; }

bool satisfied(const LayoutConstraint& c, std::span<const Point> pts, double delta) {
  RelationSet rel = relations_between(pts[static_cast<std::size_t>(c.a)],
                                      pts[static_cast<std::size_t>(c.b)], delta);
  if (c.kind == LayoutConstraint::Kind::relation) return rel.contains(c.relation);
  return rel.size() == 2;
}

}  // namespace

std::vector<Point> sample_layout(int n, std::span<const LayoutConstraint> constraints,
                                 const Geometry& geometry, Rng& rng) {
  if (n < 1 || n > 6) throw PreconditionError("sample_layout supports 1..6 objects");
  for (const auto& c : constraints) {
    if (c.a < 0 || c.b < 0 || c.a >= n || c.b >= n || c.a == c.b) {
      throw PreconditionError("layout constraint refers to an invalid position");
    }
  }
  const double lo = geometry.border;
  const double hi = geometry.arena - geometry.border;
  constexpr int kTriesPerPoint = 64;

  std::vector<Point> pts;
  for (int restart = 0; restart < kLayoutMaxRestarts; ++restart) {
    pts.clear();
    bool failed = false;
    for (int i = 0; i < n && !failed; ++i) {
      bool placed = false;
      for (int t = 0; t < kTriesPerPoint && !placed; ++t) {
        Point p{round_centi(rng.uniform(lo, hi)), round_centi(rng.uniform(lo, hi))};
        bool ok = true;
        for (const auto& q : pts) {
          if (std::hypot(p.x - q.x, p.y - q.y) < geometry.d_min) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        pts.push_back(p);
        // Check constraints whose endpoints are both placed now.
        for (const auto& c : constraints) {
          if (std::max(c.a, c.b) == i && !satisfied(c, pts, geometry.delta)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          placed = true;
        } else {
          pts.pop_back();
        }
      }
      failed = !placed;
    }
    if (!failed) return pts;
  }
  throw LayoutExhausted("no layout for " + std::to_string(n) + " objects after " +
                        std::to_string(kLayoutMaxRestarts) + " restarts");
}

}  // namespace mewl
