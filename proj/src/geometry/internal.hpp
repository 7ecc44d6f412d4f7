#pragma once

#include <vector>

#include "setstat/convex_set.hpp"
#include "setstat/planar.hpp"

namespace setstat::detail {

inline std::vector<planar::Point> to_points(const std::vector<Vec>& vertices) {
  std::vector<planar::Point> out;
  out.reserve(vertices.size());
  for (const auto& v : vertices) out.emplace_back(v(0), v(1));
  return out;
}

inline std::vector<Vec> from_points(const std::vector<planar::Point>& points) {
  std::vector<Vec> out;
  out.reserve(points.size());
  for (const auto& p : points) out.emplace_back(Vec{{p.x(), p.y()}});
  return out;
}

/// Largest absolute coordinate over a vertex list (0 for an empty list).
inline double coordinate_scale(const std::vector<Vec>& vertices) {
  double s = 0.0;
  for (const auto& v : vertices) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

/// True when the set has an exact finite vertex list (no ball sampling needed).
bool has_exact_vertices(const ConvexSet& c);

}  // namespace setstat::detail
