#ifndef VOIDCRYSTAL_WULFF_HPP
#define VOIDCRYSTAL_WULFF_HPP

#include <cmath>
#include <functional>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "voidcrystal/geometry.hpp"
#include "voidcrystal/svg.hpp"

namespace voidcrystal {

// tau as a function of the normal angle; must be positive and even
// (tau(theta) = tau(theta + pi)).
using DirectionalFunction = std::function<double(double)>;

// Unit-area Wulff shape: lambda-scaled boundary of the intersection of the
// half-planes {x : <x, n> <= tau(n)}.
struct ConvexShape {
  Polygon vertices;     // counterclockwise, strictly convex
  double lambda = 1.0;  // dilatation applied to the raw intersection

  double area() const { return polygon_signed_area(vertices); }

  double support(Vec2 dir) const {
    double best = -1e300;
    for (const auto& v : vertices) best = std::max(best, dot(v, dir));
    return best;
  }
  double support_angle(double theta) const { return support({std::cos(theta), std::sin(theta)}); }

  // worst vertex deviation under negation; ~0 for even tau
  double central_asymmetry() const {
    double worst = 0.0;
    for (const auto& v : vertices) worst = std::max(worst, point_to_polygon_boundary(-v, vertices));
    return worst;
  }

  void write_csv(std::ostream& os) const {
    os << "x,y\n" << std::setprecision(17);
    for (const auto& v : vertices) os << v.x << ',' << v.y << '\n';
  }

  void write_svg(std::ostream& os) const { voidcrystal::write_svg(os, {{vertices, "#1f6fb2"}}); }
};

inline ConvexShape wulff_construct(const DirectionalFunction& tau, int n_dirs = 256) {
  if (n_dirs < 8) throw std::invalid_argument("wulff_construct: need at least 8 directions");

  std::vector<HalfPlane> planes;
  planes.reserve(n_dirs);
  double scale = 0.0;
  for (int j = 0; j < n_dirs; ++j) {
    const double theta = 2.0 * std::numbers::pi * j / n_dirs;
    const double a = tau(theta);
    const double b = tau(theta + std::numbers::pi);
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("wulff_construct: tau must be positive");
    if (std::abs(a - b) > 1e-9 * std::max({a, b, 1.0}))
      throw std::invalid_argument("wulff_construct: tau is not even");
    const double t = 0.5 * (a + b);  // exact central symmetry of the body
    planes.push_back({{std::cos(theta), std::sin(theta)}, t});
    scale = std::max(scale, t);
  }

  Polygon body = simplify_polygon(half_plane_intersection(std::move(planes)), 1e-10);
  if (body.size() < 3) throw std::runtime_error("wulff_construct: degenerate intersection");
  double area = polygon_signed_area(body);
  if (area < 0) {
    std::reverse(body.begin(), body.end());
    area = -area;
  }
  if (!(area > 1e-18)) throw std::runtime_error("wulff_construct: empty intersection");
  if (!polygon_is_strictly_convex_ccw(body, -1e-12 * scale * scale))
    throw std::runtime_error("wulff_construct: intersection not convex");

  ConvexShape shape;
  shape.lambda = 1.0 / std::sqrt(area);
  shape.vertices.reserve(body.size());
  for (const auto& v : body) shape.vertices.push_back(v * shape.lambda);
  return shape;
}

// Surface energy of a simple closed curve: sum over edges of
// |edge| * tau(outward normal).
inline double wulff_functional(const Polygon& polygon, const DirectionalFunction& tau) {
  if (polygon.size() < 3) throw std::invalid_argument("wulff_functional: degenerate polygon");
  if (!polygon_is_simple(polygon)) throw std::invalid_argument("wulff_functional: self-intersecting polygon");
  const bool ccw = polygon_signed_area(polygon) > 0;
  double energy = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2 e = polygon[(i + 1) % polygon.size()] - polygon[i];
    const double len = e.norm();
    if (len == 0.0) continue;
    const Vec2 nrm = ccw ? Vec2{e.y, -e.x} : Vec2{-e.y, e.x};
    energy += len * tau(std::atan2(nrm.y, nrm.x));
  }
  return energy;
}

inline double support_function(const ConvexShape& shape, Vec2 direction) { return shape.support(direction); }

struct IsoperimetricReport {
  int trials = 0;
  double wulff_energy = 0.0;
  double min_margin = 1e300;  // min over trials of W_tau(polygon) - W_tau(W)
};

// Random unit-area convex polygons must not beat the constructed shape.
inline IsoperimetricReport isoperimetric_audit(const DirectionalFunction& tau, int n_trials,
                                               std::uint64_t seed = 12345, int n_dirs = 1024) {
  IsoperimetricReport rep;
  rep.trials = n_trials;
  const ConvexShape w = wulff_construct(tau, n_dirs);
  rep.wulff_energy = wulff_functional(w.vertices, tau);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < n_trials; ++t) {
    const Polygon p = random_unit_area_convex_polygon(rng, 5 + static_cast<int>(uniform_below(rng, 10)));
    rep.min_margin = std::min(rep.min_margin, wulff_functional(p, tau) - rep.wulff_energy);
  }
  return rep;
}

}

#endif
