#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "geometry/internal.hpp"
#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/min_norm_point.hpp"

namespace setstat {
namespace {

constexpr int kRefineStarts = 3;

// Signed representation: (center - x) + sum s_k a_k with s_k in {-1, +1}.
MinNormResult zonotope_min_norm(const Vec& x, const Zonotope& z) {
  std::vector<Vec> a;
  a.reserve(z.generators.size());
  for (std::size_t k = 0; k < z.generators.size(); ++k) a.push_back(std::abs(z.weights[k]) * z.generators[k]);
  const Vec shift = z.center - x;
  const LinearOracle lmo = [&](const Vec& g) {
    Vec p = shift;
    for (const auto& ak : a) p += g.dot(ak) > 0.0 ? Vec(-ak) : ak;
    return p;
  };
  return min_norm_point(lmo, shift);
}

double pointwise_gap(const Vec& x, const ConvexSet& c, const ConvexSet& d) {
  return std::abs(dist_point(x, c) - dist_point(x, d));
}

void project_to_ball(Vec& x, double r) {
  const double n = x.norm();
  if (n > r) x *= r / n;
}

// Shrinking compass search for a local maximum of the pointwise gap on |x| <= r.
double compass_refine(const ConvexSet& c, const ConvexSet& d, Vec x, double value, double step, double r) {
  const int dim = static_cast<int>(x.size());
  std::vector<Vec> moves;
  for (int j = 0; j < dim; ++j) {
    moves.push_back(Vec::Unit(dim, j));
    moves.push_back(-Vec::Unit(dim, j));
  }
  if (dim == 2) {
    const double s = std::numbers::sqrt2 / 2.0;
    for (const double a : {-s, s})
      for (const double b : {-s, s}) moves.emplace_back(Vec{{a, b}});
  }
  const double stop = 1e-7 * (1.0 + r);
  while (step > stop) {
    bool improved = false;
    for (const auto& m : moves) {
      Vec y = x + step * m;
      project_to_ball(y, r);
      const double v = pointwise_gap(y, c, d);
      if (v > value) {
        value = v;
        x = std::move(y);
        improved = true;
      }
    }
    if (!improved) step *= 0.5;
  }
  return value;
}

}  // namespace

Vec nearest_point(const Vec& x, const ConvexSet& c) {
  require_same_dim(x.size(), c.dim(), "nearest_point");
  if (const auto* b = c.as<Box>()) return x.cwiseMax(b->lower).cwiseMin(b->upper);
  if (const auto* b = c.as<Ball>()) {
    const Vec diff = x - b->center;
    const double n = diff.norm();
    if (n <= b->radius) return x;
    return b->center + (b->radius / n) * diff;
  }
  if (c.dim() == 1) {
    const auto [lo, hi] = interval_bounds(c);
    return Vec::Constant(1, std::clamp(x(0), lo, hi));
  }
  if (const auto* p = c.as<VertexPolytope>()) {
    if (p->vertices.size() == 1) return p->vertices.front();
    std::vector<Vec> shifted;
    shifted.reserve(p->vertices.size());
    for (const auto& v : p->vertices) shifted.push_back(v - x);
    return min_norm_point(shifted).point + x;
  }
  return zonotope_min_norm(x, *c.as<Zonotope>()).point + x;
}

double dist_point_squared(const Vec& x, const ConvexSet& c) {
  return (nearest_point(x, c) - x).squaredNorm();
}

double dist_point(const Vec& x, const ConvexSet& c) {
  require_same_dim(x.size(), c.dim(), "dist_point");
  if (const auto* b = c.as<Ball>()) return std::max(0.0, (x - b->center).norm() - b->radius);
  return std::sqrt(dist_point_squared(x, c));
}

bool contains(const ConvexSet& c, const Vec& x, double tol) {
  return dist_point(x, c) <= tol;
}

double support_gap(const ConvexSet& a, const ConvexSet& b, std::span<const Vec> directions) {
  double gap = 0.0;
  for (const auto& u : directions) gap = std::max(gap, std::abs(support(a, u) - support(b, u)));
  return gap;
}

HausdorffResult hausdorff_detailed(const ConvexSet& a, const ConvexSet& b, const HausdorffOptions& options) {
  require_same_dim(a.dim(), b.dim(), "hausdorff");
  if (a.dim() == 1) {
    const auto [alo, ahi] = interval_bounds(a);
    const auto [blo, bhi] = interval_bounds(b);
    return {std::max(std::abs(alo - blo), std::abs(ahi - bhi)), true, 0};
  }
  const auto* la = a.as<Ball>();
  const auto* lb = b.as<Ball>();
  if (la != nullptr && lb != nullptr) {
    return {(la->center - lb->center).norm() + std::abs(la->radius - lb->radius), true, 0};
  }
  if (detail::has_exact_vertices(a) && detail::has_exact_vertices(b)) {
    double h = 0.0;
    for (const auto& v : vertex_list(a)) h = std::max(h, dist_point(v, b));
    for (const auto& v : vertex_list(b)) h = std::max(h, dist_point(v, a));
    return {h, true, 0};
  }
  const int count = a.dim() == 2 ? options.directions : std::max(options.directions, kSampledDirectionsHighDim);
  const auto dirs = direction_grid(a.dim(), count);
  return {support_gap(a, b, dirs), false, count};
}

double hausdorff(const ConvexSet& a, const ConvexSet& b) { return hausdorff_detailed(a, b).value; }

double radial_distance(const ConvexSet& c, const ConvexSet& d, double r, const IntegratedDistanceOptions& options) {
  require_same_dim(c.dim(), d.dim(), "radial_distance");
  if (!(r >= 0.0)) throw InvalidArgument("radial_distance: radius must be nonnegative");
  const int dim = c.dim();
  std::vector<Vec> grid{Vec::Zero(dim)};
  double step = r;
  if (r > 0.0) {
    if (dim == 1) {
      const int n = std::max(2, options.points_1d);
      grid.clear();
      for (int j = 0; j < n; ++j) grid.push_back(Vec::Constant(1, -r + 2.0 * r * j / (n - 1)));
      step = 2.0 * r / (n - 1);
    } else {
      const int count = dim == 2 ? options.angles : kSampledDirectionsHighDim;
      const auto dirs = direction_grid(dim, count);
      for (int i = 1; i <= options.radii; ++i) {
        const double rho = r * i / options.radii;
        for (const auto& u : dirs) grid.push_back(rho * u);
      }
      step = r / options.radii;
    }
  }

  std::vector<std::pair<double, std::size_t>> values;
  values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values.emplace_back(pointwise_gap(grid[i], c, d), i);
  const auto starts = std::min<std::size_t>(kRefineStarts, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(starts), values.end(),
                    [](const auto& p, const auto& q) { return p.first > q.first; });
  double best = values.front().first;
  if (options.refine && r > 0.0) {
    for (std::size_t k = 0; k < starts; ++k) {
      best = std::max(best, compass_refine(c, d, grid[values[k].second], values[k].first, step, r));
    }
  }
  return best;
}

IntegratedDistanceResult integrated_distance(const ConvexSet& c, const ConvexSet& d,
                                             const IntegratedDistanceOptions& options) {
  require_same_dim(c.dim(), d.dim(), "integrated_distance");
  const auto [nodes, weights] = gauss_laguerre(options.quadrature_nodes);
  std::map<double, double> cache;
  double total = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const double r = std::min(nodes[k], options.truncation);
    auto it = cache.find(r);
    if (it == cache.end()) it = cache.emplace(r, radial_distance(c, d, r, options)).first;
    total += weights[k] * it->second;
  }
  return {total, options, true};
}

std::pair<std::vector<double>, std::vector<double>> gauss_laguerre(int n) {
  if (n < 1) throw InvalidArgument("gauss_laguerre: need at least one node");
  // Golub-Welsch on the Jacobi matrix of the Laguerre polynomials.
  Mat jacobi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    jacobi(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) jacobi(i, i + 1) = jacobi(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(jacobi);
  std::vector<double> nodes(static_cast<std::size_t>(n));
  std::vector<double> weights(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes[static_cast<std::size_t>(i)] = eig.eigenvalues()(i);
    const double v0 = eig.eigenvectors()(0, i);
    weights[static_cast<std::size_t>(i)] = v0 * v0;
  }
  return {nodes, weights};
}

}  // namespace setstat
