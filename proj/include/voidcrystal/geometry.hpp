#ifndef VOIDCRYSTAL_GEOMETRY_HPP
#define VOIDCRYSTAL_GEOMETRY_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "voidcrystal/rng.hpp"

namespace voidcrystal {

struct Vec2 {
  double x = 0.0, y = 0.0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  Vec2 operator-() const { return {-x, -y}; }
  double norm() const { return std::hypot(x, y); }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

using Polygon = std::vector<Vec2>;  // closed, vertices listed once

inline double polygon_signed_area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    a += cross(u, v);
  }
  return 0.5 * a;
}

inline double polygon_perimeter(const Polygon& p) {
  double L = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) L += (p[(i + 1) % p.size()] - p[i]).norm();
  return L;
}

inline Vec2 polygon_centroid(const Polygon& p) {
  double a = 0.0;
  Vec2 c{0, 0};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2& u = p[i];
    const Vec2& v = p[(i + 1) % p.size()];
    const double w = cross(u, v);
    a += w;
    c.x += (u.x + v.x) * w;
    c.y += (u.y + v.y) * w;
  }
  if (std::abs(a) < 1e-300) {  // degenerate: plain vertex mean
    Vec2 m{0, 0};
    for (const auto& v : p) m = m + v;
    return m * (1.0 / p.size());
  }
  return c * (1.0 / (3.0 * a));
}

inline bool polygon_is_strictly_convex_ccw(const Polygon& p, double eps = 0.0) {
  if (p.size() < 3) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec2 e1 = p[(i + 1) % p.size()] - p[i];
    const Vec2 e2 = p[(i + 2) % p.size()] - p[(i + 1) % p.size()];
    if (cross(e1, e2) <= eps) return false;
  }
  return true;
}

inline Polygon translate(const Polygon& p, Vec2 t) {
  Polygon out = p;
  for (auto& v : out) v = v + t;
  return out;
}

inline Polygon scale(const Polygon& p, double s) {
  Polygon out = p;
  for (auto& v : out) v = v * s;
  return out;
}

// Drops repeated vertices and merges collinear runs; tolerances are
// relative to the polygon scale.
inline Polygon simplify_polygon(const Polygon& p, double rel_eps = 1e-9) {
  if (p.size() < 3) return p;
  double scale = 0.0;
  for (const auto& v : p) scale = std::max({scale, std::abs(v.x), std::abs(v.y)});
  const double dist_eps = rel_eps * std::max(scale, 1e-30);

  Polygon dedup;
  for (const auto& v : p) {
    if (dedup.empty() || (v - dedup.back()).norm() > dist_eps) dedup.push_back(v);
  }
  while (dedup.size() > 1 && (dedup.front() - dedup.back()).norm() <= dist_eps) dedup.pop_back();
  if (dedup.size() < 3) return dedup;

  Polygon out;
  const std::size_t m = dedup.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2& a = dedup[(i + m - 1) % m];
    const Vec2& b = dedup[i];
    const Vec2& c = dedup[(i + 1) % m];
    const Vec2 e1 = b - a, e2 = c - b;
    if (std::abs(cross(e1, e2)) > dist_eps * (e1.norm() + e2.norm())) out.push_back(b);
  }
  return out.size() >= 3 ? out : dedup;
}

// ---------------------------------------------------------------------------
// Half-plane intersection. Half-planes are {p : <p, normal> <= offset} with
// unit normals; the result must be bounded (the caller supplies a full
// circle of directions). Standard deque sweep over planes sorted by the
// direction of their boundary line.

struct HalfPlane {
  Vec2 normal;
  double offset;
};

namespace detail {

inline Vec2 line_direction(const HalfPlane& h) { return {-h.normal.y, h.normal.x}; }

inline Vec2 line_intersection(const HalfPlane& a, const HalfPlane& b) {
  const double det = cross(a.normal, b.normal);
  if (std::abs(det) < 1e-15)
    throw std::runtime_error("half_plane_intersection: parallel active planes");
  return {(a.offset * b.normal.y - b.offset * a.normal.y) / det,
          (b.offset * a.normal.x - a.offset * b.normal.x) / det};
}

inline bool outside(const HalfPlane& h, Vec2 p) { return dot(h.normal, p) > h.offset + 1e-13 * (1.0 + std::abs(h.offset)); }

}

inline Polygon half_plane_intersection(std::vector<HalfPlane> planes) {
  if (planes.size() < 3) throw std::invalid_argument("half_plane_intersection: need >= 3 planes");
  std::sort(planes.begin(), planes.end(), [](const HalfPlane& a, const HalfPlane& b) {
    const Vec2 da = detail::line_direction(a), db = detail::line_direction(b);
    return std::atan2(da.y, da.x) < std::atan2(db.y, db.x);
  });
  // among (near-)parallel planes keep the most restrictive
  std::vector<HalfPlane> uniq;
  for (const auto& h : planes) {
    if (!uniq.empty()) {
      const Vec2 da = detail::line_direction(uniq.back()), db = detail::line_direction(h);
      if (std::abs(std::atan2(da.y, da.x) - std::atan2(db.y, db.x)) < 1e-12) {
        if (h.offset < uniq.back().offset) uniq.back() = h;
        continue;
      }
    }
    uniq.push_back(h);
  }

  std::vector<HalfPlane> dq(uniq.size() + 1);
  std::size_t lo = 0, hi = 0;
  dq[0] = uniq[0];
  for (std::size_t i = 1; i < uniq.size(); ++i) {
    while (hi > lo && detail::outside(uniq[i], detail::line_intersection(dq[hi], dq[hi - 1]))) --hi;
    while (hi > lo && detail::outside(uniq[i], detail::line_intersection(dq[lo], dq[lo + 1]))) ++lo;
    dq[++hi] = uniq[i];
  }
  while (hi - lo > 1 && detail::outside(dq[lo], detail::line_intersection(dq[hi], dq[hi - 1]))) --hi;
  while (hi - lo > 1 && detail::outside(dq[hi], detail::line_intersection(dq[lo], dq[lo + 1]))) ++lo;
  if (hi - lo < 2) throw std::runtime_error("half_plane_intersection: degenerate intersection");

  Polygon poly;
  for (std::size_t i = lo; i <= hi; ++i)
    poly.push_back(detail::line_intersection(dq[i], i == hi ? dq[lo] : dq[i + 1]));
  return poly;
}

// ---------------------------------------------------------------------------
// Distances.

// Proper crossing test between non-adjacent edges; O(n^2), desk scale.
inline bool polygon_is_simple(const Polygon& p) {
  const std::size_t n = p.size();
  if (n < 3) return false;
  const auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
    const double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // shared vertex
      const Vec2 a = p[i], b = p[(i + 1) % n], c = p[j], d = p[(j + 1) % n];
      if (orient(a, b, c) * orient(a, b, d) < 0 && orient(c, d, a) * orient(c, d, b) < 0) return false;
    }
  }
  return true;
}

inline double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return (p - (a + ab * t)).norm();
}

inline double point_to_polygon_boundary(Vec2 p, const Polygon& poly) {
  double best = 1e300;
  for (std::size_t i = 0; i < poly.size(); ++i)
    best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
  return best;
}

namespace detail {

struct BoundaryDistance {
  double dist;
  std::size_t edge;  // nearest edge of the polygon
};

inline BoundaryDistance nearest_boundary_edge(Vec2 p, const Polygon& poly) {
  BoundaryDistance out{1e300, 0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const double d = point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]);
    if (d < out.dist) out = {d, i};
  }
  return out;
}

// Max over the segment [a,b] of dist(., boundary of poly). The distance to
// any single edge is convex along the segment, so on a stretch where the
// same edge stays nearest the maximum sits at the endpoints; recursion only
// has to split where the nearest edge changes.
inline void segment_max_distance(Vec2 a, Vec2 b, const Polygon& poly, double tol, double& best) {
  struct Item {
    Vec2 a, b;
    BoundaryDistance da, db;
  };
  std::vector<Item> stack;
  stack.push_back({a, b, nearest_boundary_edge(a, poly), nearest_boundary_edge(b, poly)});
  while (!stack.empty()) {
    const Item it = stack.back();
    stack.pop_back();
    best = std::max({best, it.da.dist, it.db.dist});
    if (it.da.edge == it.db.edge) continue;  // endpoint max is exact here
    if ((it.b - it.a).norm() < tol) continue;
    const Vec2 m = (it.a + it.b) * 0.5;
    const BoundaryDistance dm = nearest_boundary_edge(m, poly);
    stack.push_back({it.a, m, it.da, dm});
    stack.push_back({m, it.b, dm, it.db});
  }
}

}

inline double directed_hausdorff(const Polygon& from, const Polygon& to, double tol = 1e-9) {
  if (from.empty() || to.empty()) throw std::invalid_argument("directed_hausdorff: empty polygon");
  double best = 0.0;
  for (std::size_t i = 0; i < from.size(); ++i)
    detail::segment_max_distance(from[i], from[(i + 1) % from.size()], to, tol, best);
  return best;
}

// Hausdorff distance between polygon boundaries, edges included.
inline double polygon_hausdorff(const Polygon& a, const Polygon& b, double tol = 1e-9) {
  if (a.size() < 3 || b.size() < 3) throw std::invalid_argument("polygon_hausdorff: degenerate polygon");
  return std::max(directed_hausdorff(a, b, tol), directed_hausdorff(b, a, tol));
}

// ---------------------------------------------------------------------------
// Random convex polygons for audits: convex hull of uniform points in the
// unit disk, rescaled to unit area.

inline Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  const std::size_t n = pts.size();
  if (n < 3) return pts;
  std::vector<Vec2> hull(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

inline Polygon random_unit_area_convex_polygon(std::mt19937_64& rng, int n_points = 12) {
  for (;;) {
    std::vector<Vec2> pts;
    while (static_cast<int>(pts.size()) < n_points) {
      const double x = 2.0 * uniform01(rng) - 1.0;
      const double y = 2.0 * uniform01(rng) - 1.0;
      if (x * x + y * y <= 1.0) pts.push_back({x, y});
    }
    Polygon hull = convex_hull(std::move(pts));
    if (hull.size() < 3) continue;
    const double area = polygon_signed_area(hull);
    if (area < 1e-6) continue;
    const Vec2 c = polygon_centroid(hull);
    const double s = 1.0 / std::sqrt(area);
    for (auto& v : hull) v = (v - c) * s;
    return hull;
  }
}

}

#endif
