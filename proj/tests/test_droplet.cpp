#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "helpers.hpp"
#include "voidcrystal/droplet.hpp"

using namespace voidcrystal;

namespace {

Region block_region(const TorusLattice& lat, int x0, int y0, int w, int h) {
  Region r(lat);
  for (int dy = 0; dy < h; ++dy)
    for (int dx = 0; dx < w; ++dx)
      r.add(lat.site_of((x0 + dx) % lat.side(), (y0 + dy) % lat.side()));
  return r;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
  bool inside = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    if ((poly[i].y > p.y) != (poly[j].y > p.y)) {
      const double xcross =
          poly[j].x + (p.y - poly[j].y) / (poly[i].y - poly[j].y) * (poly[i].x - poly[j].x);
      if (p.x < xcross) inside = !inside;
    }
  }
  return inside;
}

// sites whose centers fall inside the polygon (translated to the torus middle)
Region rasterize(const TorusLattice& lat, const Polygon& poly, Vec2 center) {
  Region r(lat);
  for (int y = 0; y < lat.side(); ++y)
    for (int x = 0; x < lat.side(); ++x)
      if (point_in_polygon({x - center.x, y - center.y}, poly)) r.add(lat.site_of(x, y));
  return r;
}

// dense boundary sampling oracle for the Hausdorff distance
double hausdorff_by_sampling(const Polygon& a, const Polygon& b, int per_edge = 2000) {
  const auto directed = [&](const Polygon& from, const Polygon& to) {
    double best = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      const Vec2 p = from[i], q = from[(i + 1) % from.size()];
      for (int t = 0; t <= per_edge; ++t) {
        const Vec2 s = p + (q - p) * (static_cast<double>(t) / per_edge);
        best = std::max(best, point_to_polygon_boundary(s, to));
      }
    }
    return best;
  };
  return std::max(directed(a, b), directed(b, a));
}

const Polygon unit_square{{0.5, 0.5}, {-0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}};

}

TEST_CASE("contour extraction") {
  TorusLattice lat(2, 16);

  SECTION("square block: one contour of perimeter 4 side") {
    const auto cs = extract_contours(block_region(lat, 3, 3, 5, 5));
    REQUIRE(cs.size() == 1);
    REQUIRE(cs[0].edge_count == 20);
    REQUIRE(!cs[0].winding);
    REQUIRE_THAT(cs[0].signed_area, Catch::Matchers::WithinAbs(25.0, 1e-12));
    REQUIRE_THAT(cs[0].diameter, Catch::Matchers::WithinAbs(5 * std::numbers::sqrt2, 1e-12));
  }
  SECTION("interior hole adds a length-4 contour") {
    Region r = block_region(lat, 3, 3, 5, 5);
    r.remove(lat.site_of(5, 5));
    const auto cs = extract_contours(r);
    REQUIRE(cs.size() == 2);
    REQUIRE(cs[0].edge_count == 20);
    REQUIRE(cs[1].edge_count == 4);
    REQUIRE(cs[1].signed_area < 0);  // holes run clockwise
  }
  SECTION("two disjoint blocks, sorted by diameter") {
    Region r = block_region(lat, 1, 1, 4, 4);
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx) r.add(lat.site_of(9 + dx, 9 + dy));
    const auto cs = extract_contours(r);
    REQUIRE(cs.size() == 2);
    REQUIRE(cs[0].diameter > cs[1].diameter);
    REQUIRE(cs[0].edge_count == 16);
    REQUIRE(cs[1].edge_count == 8);
  }
  SECTION("diagonal touch splits into two contours") {
    Region r(lat);
    r.add(lat.site_of(4, 4));
    r.add(lat.site_of(5, 5));
    const auto cs = extract_contours(r);
    REQUIRE(cs.size() == 2);
    REQUIRE(cs[0].edge_count == 4);
    REQUIRE(cs[1].edge_count == 4);
  }
  SECTION("a full row winds around the torus") {
    const auto cs = extract_contours(block_region(lat, 0, 7, 16, 1));
    REQUIRE(cs.size() == 2);  // two straight dual lines
    REQUIRE(cs[0].winding);
    REQUIRE(cs[1].winding);
  }
  SECTION("a droplet across the seam unwraps cleanly") {
    const auto cs = extract_contours(block_region(lat, 14, 14, 5, 5));
    REQUIRE(cs.size() == 1);
    REQUIRE(!cs[0].winding);
    REQUIRE(cs[0].edge_count == 20);
    REQUIRE_THAT(cs[0].diameter, Catch::Matchers::WithinAbs(5 * std::numbers::sqrt2, 1e-12));
  }
  SECTION("edge conservation on random regions") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
      const Region r = vctest::random_region(lat, 40, rng);
      const auto cs = extract_contours(r);
      int edges = 0;
      for (const auto& c : cs) edges += c.edge_count;
      REQUIRE(edges == r.boundary_pair_count());
    }
  }
}

TEST_CASE("component classification") {
  const int N = 128;
  Contour big;
  big.diameter = 0.8 * N;
  Contour small1, small2;
  small1.diameter = 5.0;
  small2.diameter = 3.0;

  SECTION("one big plus small ones passes") {
    const auto c = classify_components({big, small1, small2}, N);
    REQUIRE(c.verdict == Verdict::pass);
    REQUIRE(c.big_index == 0);
    REQUIRE_THAT(c.big_diameter, Catch::Matchers::WithinAbs(0.8 * N, 1e-12));
    REQUIRE_THAT(c.max_small_diameter, Catch::Matchers::WithinAbs(5.0, 1e-12));
  }
  SECTION("two big contours fail") {
    REQUIRE(classify_components({big, big}, N).verdict == Verdict::multiple_big);
  }
  SECTION("no big contour fails") {
    REQUIRE(classify_components({small1, small2}, N).verdict == Verdict::no_big);
  }
  SECTION("an oversized small contour fails") {
    Contour mid;
    mid.diameter = 11.0 * std::log(static_cast<double>(N));
    REQUIRE(classify_components({big, mid}, N).verdict == Verdict::small_too_big);
  }
  SECTION("winding contours are rejected, not closed") {
    Contour wind;
    wind.diameter = N;
    wind.winding = true;
    REQUIRE(classify_components({big, wind}, N).verdict == Verdict::winding);
  }
}

TEST_CASE("polygon Hausdorff distance") {
  SECTION("identity") { REQUIRE(hausdorff(unit_square, unit_square) == 0.0); }
  SECTION("pure shift") {
    REQUIRE_THAT(hausdorff(unit_square, translate(unit_square, {1.0, 0.0})),
                 Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
  SECTION("rotated concentric square, against dense sampling") {
    Polygon rot{{std::numbers::sqrt2 / 2, 0}, {0, std::numbers::sqrt2 / 2},
                {-std::numbers::sqrt2 / 2, 0}, {0, -std::numbers::sqrt2 / 2}};
    const double expect = (std::numbers::sqrt2 - 1) / 2;
    const double d = hausdorff(unit_square, rot);
    REQUIRE_THAT(d, Catch::Matchers::WithinAbs(expect, 1e-9));
    REQUIRE_THAT(d, Catch::Matchers::WithinAbs(hausdorff_by_sampling(unit_square, rot), 1e-6));
  }
  SECTION("metric axioms on fixtures") {
    Polygon a = unit_square;
    Polygon b = translate(scale(unit_square, 1.4), {0.3, -0.2});
    Polygon c{{1.2, 0.1}, {-0.4, 0.9}, {-0.8, -0.6}, {0.4, -1.0}};
    REQUIRE_THAT(hausdorff(a, b), Catch::Matchers::WithinAbs(hausdorff(b, a), 1e-12));
    REQUIRE(hausdorff(a, c) <= hausdorff(a, b) + hausdorff(b, c) + 1e-12);
    REQUIRE(hausdorff(a, b) > 0.0);
  }
}

TEST_CASE("shift and scale fitting") {
  const auto wulff_square =
      wulff_construct([](double t) { return 0.5 * (std::abs(std::cos(t)) + std::abs(std::sin(t))); }, 512);
  TorusLattice lat(2, 64);
  const double c_true = 14.0;
  const Region raster = rasterize(lat, scale(wulff_square.vertices, c_true), {32.3, 31.6});
  const auto contours = extract_contours(raster);
  REQUIRE(contours.size() == 1);
  const Contour& gamma = contours[0];

  SECTION("self-fit lands within one lattice unit") {
    const auto fit = fit_shift_and_scale(gamma, wulff_square);
    REQUIRE_THAT(fit.scale, Catch::Matchers::WithinRel(c_true, 0.05));
    REQUIRE(fit.hausdorff <= 1.0);
  }
  SECTION("a known extra shift is recovered") {
    const auto base = fit_shift_and_scale(gamma, wulff_square);
    Contour moved = gamma;
    moved.points = translate(gamma.points, {3.7, -2.1});
    const auto fit = fit_shift_and_scale(moved, wulff_square);
    REQUIRE_THAT(fit.shift.x - base.shift.x, Catch::Matchers::WithinAbs(-3.7, 0.1));
    REQUIRE_THAT(fit.shift.y - base.shift.y, Catch::Matchers::WithinAbs(2.1, 0.1));
    REQUIRE_THAT(fit.hausdorff, Catch::Matchers::WithinAbs(base.hausdorff, 0.05));
  }
  SECTION("never worse than centroid alignment") {
    const auto fit = fit_shift_and_scale(gamma, wulff_square);
    const Polygon ref = scale(wulff_square.vertices, fit.scale);
    const Vec2 centroid_shift = polygon_centroid(ref) - polygon_centroid(gamma.points);
    const double at_centroid = hausdorff(translate(gamma.points, centroid_shift), ref);
    REQUIRE(fit.hausdorff <= at_centroid + 1e-9);
  }
  SECTION("winding contours are rejected") {
    Contour wind;
    wind.winding = true;
    wind.points = unit_square;
    REQUIRE_THROWS_AS(fit_shift_and_scale(wind, wulff_square), std::invalid_argument);
  }
}

TEST_CASE("per-sample analysis artifacts") {
  const auto shape = wulff_construct([](double) { return 1.0; }, 256);
  TorusLattice lat(2, 64);
  Region r = rasterize(lat, scale(shape.vertices, 14.0), {32, 32});
  r.add(lat.site_of(2, 2));  // one stray monomer
  const auto a = analyze_region(r, shape, 42, 0.2);
  REQUIRE(a.sample_id == 42);
  REQUIRE(a.n_contours == 2);
  REQUIRE(a.verdict == Verdict::pass);
  REQUIRE(a.big_diameter > 15.0);
  REQUIRE_THAT(a.max_small_diameter, Catch::Matchers::WithinAbs(std::numbers::sqrt2, 1e-12));
  REQUIRE(a.hausdorff > 0.0);
  REQUIRE_THAT(a.hausdorff_over_n, Catch::Matchers::WithinAbs(a.hausdorff / 64.0, 1e-15));
  REQUIRE(a.largest_component_fraction > 0.99);

  std::ostringstream csv;
  write_analysis_csv_header(csv);
  write_analysis_csv_row(csv, a);
  REQUIRE(csv.str().rfind("sample_id,n_contours,big_diam,max_small_diam,c,hausdorff,hausdorff_over_N,verdict\n",
                          0) == 0);
  REQUIRE(csv.str().find("PASS") != std::string::npos);

  const auto contours = extract_contours(r);
  const auto fit = fit_shift_and_scale(contours[0], shape);
  std::ostringstream svg;
  write_overlay_svg(svg, contours[0], fit, shape);
  REQUIRE(svg.str().find("<svg") != std::string::npos);
}
