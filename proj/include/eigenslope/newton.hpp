#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "eigenslope/poly.hpp"

namespace eigenslope {

// Lower convex hull of valuation points of a polynomial. Slopes are exact
// rationals; a coefficient that is only zero to working precision enters with
// its valuation lower bound and poisons the hull if it would be a vertex.
struct NewtonPolygon {
  struct Vertex {
    long x;
    mpq_class y;
  };
  std::vector<Vertex> vertices;               // strictly increasing x, lower-convex
  std::vector<std::pair<mpq_class, long>> slopes;  // (slope, horizontal multiplicity), increasing

  long total_length() const {
    long t = 0;
    for (auto& s : slopes) t += s.second;
    return t;
  }

  // Number of slopes <= h, with multiplicity. Slopes compare exactly; ties at h
  // belong to the <=h side, so the break always ends at a lattice vertex.
  long count_slopes_le(const mpq_class& h) const {
    long d = 0;
    for (auto& s : slopes)
      if (s.first <= h) d += s.second;
    return d;
  }

  std::vector<mpq_class> slope_list() const {
    std::vector<mpq_class> out;
    for (auto& s : slopes)
      for (long i = 0; i < s.second; ++i) out.push_back(s.first);
    return out;
  }
};

struct PolygonPoint {
  long x;
  mpq_class y;
  bool lower_bound_only;  // valuation known only as ">= y"
};

namespace detail {
inline std::vector<int> hull_indices(const std::vector<PolygonPoint>& pts) {
  std::vector<int> hull;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    while (hull.size() >= 2) {
      const auto& a = pts[hull[hull.size() - 2]];
      const auto& b = pts[hull[hull.size() - 1]];
      const auto& c = pts[i];
      // keep b iff it is strictly below segment a-c: cross > 0 keeps
      mpq_class cross = (b.y - a.y) * (c.x - a.x) - (c.y - a.y) * (b.x - a.x);
      if (cross < 0) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  return hull;
}

inline NewtonPolygon polygon_from(const std::vector<PolygonPoint>& pts, const std::vector<int>& hull,
                                  size_t cut) {
  NewtonPolygon np;
  for (size_t t = 0; t < cut; ++t) np.vertices.push_back({pts[hull[t]].x, pts[hull[t]].y});
  for (size_t i = 0; i + 1 < np.vertices.size(); ++i) {
    mpq_class dy = np.vertices[i + 1].y - np.vertices[i].y;
    long dx = np.vertices[i + 1].x - np.vertices[i].x;
    mpq_class s = dy / dx;
    s.canonicalize();
    np.slopes.push_back({s, dx});
  }
  return np;
}
}  // namespace detail

inline NewtonPolygon lower_hull(const std::vector<PolygonPoint>& pts_in) {
  std::vector<PolygonPoint> pts = pts_in;
  if (pts.empty()) return {};
  std::vector<int> hull = detail::hull_indices(pts);
  for (int idx : hull)
    if (pts[idx].lower_bound_only)
      throw AmbiguousVertex("newton polygon vertex rests on a coefficient that is zero to precision");
  return detail::polygon_from(pts, hull, hull.size());
}

// Hull prefix supported entirely on certified points: vertices are kept up to
// (not including) the first vertex that is only a valuation lower bound.
// Raising the uncertain points can only move the hull at or beyond that
// vertex, so the prefix is exact.
inline NewtonPolygon certified_hull_prefix(const std::vector<PolygonPoint>& pts_in,
                                           bool* complete = nullptr) {
  std::vector<PolygonPoint> pts = pts_in;
  if (complete) *complete = true;
  if (pts.empty()) return {};
  std::vector<int> hull = detail::hull_indices(pts);
  size_t cut = hull.size();
  for (size_t t = 0; t < hull.size(); ++t)
    if (pts[hull[t]].lower_bound_only) {
      cut = t;
      if (complete) *complete = false;
      break;
    }
  return detail::polygon_from(pts, hull, cut);
}

namespace detail {
inline std::vector<PolygonPoint> padic_points(const Poly<PadicScalar>& f) {
  if (f.size() == 0) throw MathError("newton_polygon: empty polynomial");
  if (!f.c[0].is_unit()) throw MathError("newton_polygon: constant term must be a unit");
  std::vector<PolygonPoint> pts;
  for (int i = 0; i < f.size(); ++i) {
    const auto& a = f.c[i];
    if (a.is_exact_zero()) continue;
    bool lb = a.is_zero_to_prec();
    pts.push_back({i, mpq_class(a.val()), lb});
  }
  return pts;
}
}  // namespace detail

// Polygon of a p-adic polynomial with a unit constant term.
inline NewtonPolygon newton_polygon(const Poly<PadicScalar>& f) {
  return lower_hull(detail::padic_points(f));
}

// The exactly-certified part of the polygon; `complete` reports whether the
// polygon reached the last coefficient without meeting an uncertain vertex.
inline NewtonPolygon certified_polygon(const Poly<PadicScalar>& f, bool* complete = nullptr) {
  return certified_hull_prefix(detail::padic_points(f), complete);
}

// Polygon of an exact rational polynomial w.r.t. v_p.
inline NewtonPolygon newton_polygon(const Poly<mpq_class>& f, long p) {
  std::vector<PolygonPoint> pts;
  for (int i = 0; i < f.size(); ++i) {
    if (f.c[i] == 0) continue;
    pts.push_back({i, mpq_class(mpq_val(f.c[i], p)), false});
  }
  if (pts.empty()) throw MathError("newton_polygon: zero polynomial");
  return lower_hull(pts);
}

}  // namespace eigenslope
