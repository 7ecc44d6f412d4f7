#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

// Exact planar polygon helpers shared by the geometry and inverse-opt modules.
namespace setstat::planar {

using Point = Eigen::Vector2d;

/// Relative collinearity tolerance used when pruning hull vertices.
inline constexpr double kCollinearTol = 1e-12;

/// Monotone-chain convex hull. Returns extreme points counter-clockwise,
/// starting from the lexicographically smallest one. Collinear and
/// coincident points are dropped; a degenerate input yields 1 or 2 points.
std::vector<Point> convex_hull(std::vector<Point> points);

/// Minkowski sum of two convex polygons given as hulls (any vertex count >= 1).
std::vector<Point> minkowski_sum(const std::vector<Point>& a, const std::vector<Point>& b);

/// normal . x <= offset
struct HalfPlane {
  Point normal;
  double offset = 0.0;
};

/// Half-plane description of a hull. Segments and points are described by
/// their two side normals plus caps, so the intersection reproduces them.
std::vector<HalfPlane> halfplanes(const std::vector<Point>& hull);

/// Clips a convex polygon by a half-plane; points within `tol` of the
/// boundary are kept. Returns an empty vector if nothing survives.
std::vector<Point> clip(const std::vector<Point>& polygon, const HalfPlane& hp, double tol);

/// Intersection of half-planes, restricted to the box [lo, hi]. Empty vector
/// when infeasible beyond `tol`.
std::vector<Point> intersect(const std::vector<HalfPlane>& planes, const Point& lo, const Point& hi,
                             double tol);

/// Largest distance between two vertices.
double diameter(const std::vector<Point>& points);

}  // namespace setstat::planar
