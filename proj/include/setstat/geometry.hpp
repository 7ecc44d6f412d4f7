#pragma once

#include <optional>
#include <span>
#include <vector>

#include "setstat/convex_set.hpp"

namespace setstat {

/// Directions used when a ball or a set in d > 2 must be replaced by a
/// support-sampled polytope. Results built this way are inscribed in the
/// exact set.
inline constexpr int kBallPolygonVertices = 720;
inline constexpr int kSampledDirectionsHighDim = 512;

// ---- Minkowski algebra -----------------------------------------------------

/// A (+) B. Exact for every pair in d <= 2 except pairs that mix a ball in
/// the plane with another variant; those, and mixed variants in d > 2, are
/// support-sampled.
ConvexSet minkowski_sum(const ConvexSet& a, const ConvexSet& b);

/// C + {v}.
ConvexSet translate(const ConvexSet& c, const Vec& v);

ConvexSet scale(double factor, const ConvexSet& c);

/// Psi * C for a square matrix Psi.
ConvexSet scale(const Mat& psi, const ConvexSet& c);

/// C (-) D = {x : x + D subset of C}. std::nullopt when the erosion is empty.
/// Exact in d <= 2 and for box/box, ball/ball and singleton subtrahends in
/// any dimension; other d > 2 inputs throw Unsupported.
std::optional<ConvexSet> minkowski_diff(const ConvexSet& c, const ConvexSet& d);

/// sum_i weights[i] * sets[i] over the sets with positive weight. An
/// all-zero weight vector throws InvalidArgument unless `allow_all_zero`, in
/// which case the singleton {0} is returned.
ConvexSet weighted_minkowski_average(std::span<const double> weights,
                                     std::span<const ConvexSet> sets,
                                     bool allow_all_zero = false);

/// co(A u B). d <= 2, or vertex polytopes in any d.
ConvexSet convex_hull_union(const ConvexSet& a, const ConvexSet& b);

/// A n B, or std::nullopt if empty. d <= 2, or box/box in any d.
std::optional<ConvexSet> intersect(const ConvexSet& a, const ConvexSet& b);

/// C n {x : normal . x <= offset}. d <= 2.
std::optional<ConvexSet> intersect_halfspace(const ConvexSet& c, const Vec& normal, double offset);

// ---- Support function and vertices -----------------------------------------

double support(const ConvexSet& c, const Vec& u);

/// A maximiser of u . y over y in C.
Vec support_point(const ConvexSet& c, const Vec& u);

/// Extreme points for d <= 2; balls in the plane are sampled with
/// kBallPolygonVertices points. `exact` reports whether sampling happened.
std::vector<Vec> vertex_list(const ConvexSet& c, bool* exact = nullptr);

/// Converts to a VertexPolytope (exact unless `c` is a ball in d >= 2).
ConvexSet to_polytope(const ConvexSet& c);

/// Lower/upper end of a one-dimensional set.
std::pair<double, double> interval_bounds(const ConvexSet& c);

/// Unit directions on the circle (d = 2), {-1, +1} (d = 1), or a
/// deterministic quasi-uniform set on the sphere (d > 2).
std::vector<Vec> direction_grid(int dim, int count);

// ---- Distances --------------------------------------------------------------

double dist_point(const Vec& x, const ConvexSet& c);
double dist_point_squared(const Vec& x, const ConvexSet& c);

/// Projection of x onto C.
Vec nearest_point(const Vec& x, const ConvexSet& c);

/// d(x, C) <= tol.
bool contains(const ConvexSet& c, const Vec& x, double tol = 0.0);

struct HausdorffOptions {
  /// Direction count for the support-grid route (used when a side has no
  /// exact vertex list).
  int directions = 3600;
};

struct HausdorffResult {
  double value = 0.0;
  bool exact = true;
  /// 0 when the vertex formula or a closed form was used.
  int directions = 0;
};

HausdorffResult hausdorff_detailed(const ConvexSet& a, const ConvexSet& b,
                                   const HausdorffOptions& options = {});

/// Pompeiu-Hausdorff distance.
double hausdorff(const ConvexSet& a, const ConvexSet& b);

/// max over the direction grid of |h(u, A) - h(u, B)|.
double support_gap(const ConvexSet& a, const ConvexSet& b, std::span<const Vec> directions);

struct IntegratedDistanceOptions {
  int radii = 64;
  int angles = 64;
  int points_1d = 128;
  int quadrature_nodes = 64;
  double truncation = 20.0;
  /// Polish the best grid points by a shrinking compass search.
  bool refine = true;
};

struct IntegratedDistanceResult {
  double value = 0.0;
  IntegratedDistanceOptions options;
  /// Always true: both the inner maximisation and the outer integral are
  /// discretised.
  bool approximate = true;
};

/// int_0^inf D_r(C, D) e^{-r} dr with D_r(C, D) = max_{|x| <= r} |d(x,C) - d(x,D)|.
IntegratedDistanceResult integrated_distance(const ConvexSet& c, const ConvexSet& d,
                                             const IntegratedDistanceOptions& options = {});

/// D_r for a single radius, on the same grid integrated_distance uses.
double radial_distance(const ConvexSet& c, const ConvexSet& d, double r,
                       const IntegratedDistanceOptions& options = {});

/// Nodes and weights of the n-point Gauss-Laguerre rule for int_0^inf f(r) e^{-r} dr.
std::pair<std::vector<double>, std::vector<double>> gauss_laguerre(int n);

}  // namespace setstat
