#ifndef VOIDCRYSTAL_SVG_HPP
#define VOIDCRYSTAL_SVG_HPP

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "voidcrystal/geometry.hpp"

namespace voidcrystal {

// Writes closed polygon paths into a unit viewport, common scale, y up.
inline void write_svg(std::ostream& os, const std::vector<std::pair<Polygon, std::string>>& paths) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& [poly, color] : paths)
    for (const auto& v : poly) {
      xmin = std::min(xmin, v.x);
      xmax = std::max(xmax, v.x);
      ymin = std::min(ymin, v.y);
      ymax = std::max(ymax, v.y);
    }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.05 * span;
  const double s = 1.0 / (span + 2 * pad);
  const auto tx = [&](double x) { return (x - xmin + pad) * s; };
  const auto ty = [&](double y) { return 1.0 - (y - ymin + pad) * s; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\">\n";
  for (const auto& [poly, color] : paths) {
    if (poly.empty()) continue;
    os << "  <path fill=\"none\" stroke=\"" << color << "\" stroke-width=\"0.004\" d=\"";
    for (std::size_t i = 0; i < poly.size(); ++i)
      os << (i == 0 ? 'M' : 'L') << tx(poly[i].x) << ' ' << ty(poly[i].y) << ' ';
    os << "Z\"/>\n";
  }
  os << "</svg>\n";
}

}

#endif
