#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "geometry/internal.hpp"
#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"

namespace setstat {
namespace {

using planar::Point;

constexpr int kMaxCornerDim = 16;
constexpr std::size_t kMaxZonotopeEnumeration = 16;

std::vector<Vec> box_corners(const Box& b) {
  const auto d = b.lower.size();
  if (d > kMaxCornerDim) throw Unsupported("box corners: dimension too large to enumerate");
  std::vector<Vec> out;
  const std::size_t count = std::size_t{1} << d;
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec v(d);
    for (Eigen::Index j = 0; j < d; ++j) v(j) = (mask >> j) & 1U ? b.upper(j) : b.lower(j);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> zonotope_vertices_2d(const Zonotope& z) {
  std::vector<Point> segs;
  Point low(z.center(0), z.center(1));
  for (std::size_t k = 0; k < z.generators.size(); ++k) {
    Point a = std::abs(z.weights[k]) * Point(z.generators[k](0), z.generators[k](1));
    if (a.isZero(0.0)) continue;
    if (a.y() < 0.0 || (a.y() == 0.0 && a.x() < 0.0)) a = -a;
    segs.push_back(a);
    low -= a;
  }
  std::sort(segs.begin(), segs.end(), [](const Point& p, const Point& q) {
    return std::atan2(p.y(), p.x()) < std::atan2(q.y(), q.x());
  });
  std::vector<Point> pts{low};
  Point cur = low;
  for (const auto& a : segs) pts.push_back(cur += 2.0 * a);
  for (const auto& a : segs) pts.push_back(cur -= 2.0 * a);
  return detail::from_points(planar::convex_hull(std::move(pts)));
}

std::vector<Vec> zonotope_vertices_enumerated(const Zonotope& z) {
  if (z.generators.size() > kMaxZonotopeEnumeration) {
    throw Unsupported("zonotope vertices: too many generators to enumerate in d > 2");
  }
  std::vector<Vec> out;
  const std::size_t count = std::size_t{1} << z.generators.size();
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec v = z.center;
    for (std::size_t k = 0; k < z.generators.size(); ++k) {
      const double s = (mask >> k) & 1U ? 1.0 : -1.0;
      v += s * std::abs(z.weights[k]) * z.generators[k];
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<Vec> ball_polygon(const Ball& b, int count) {
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * k / count;
    out.emplace_back(b.center + b.radius * Vec{{std::cos(t), std::sin(t)}});
  }
  return out;
}

// Support points of `c` over the high-dimensional sampled direction grid.
std::vector<Vec> support_sample(const ConvexSet& a, const ConvexSet* b = nullptr) {
  const auto dirs = direction_grid(a.dim(), kSampledDirectionsHighDim);
  std::vector<Vec> pts;
  pts.reserve(dirs.size());
  for (const auto& u : dirs) {
    Vec p = support_point(a, u);
    if (b != nullptr) p += support_point(*b, u);
    pts.push_back(std::move(p));
  }
  return pts;
}

bool same_generators(const Zonotope& a, const Zonotope& b) {
  if (a.generators.size() != b.generators.size()) return false;
  for (std::size_t k = 0; k < a.generators.size(); ++k) {
    if (a.generators[k] != b.generators[k]) return false;
  }
  return true;
}

Zonotope box_as_zonotope(const Box& b) {
  const auto d = b.lower.size();
  Zonotope z{0.5 * (b.lower + b.upper), {}, {}};
  for (Eigen::Index j = 0; j < d; ++j) {
    z.generators.push_back(Vec::Unit(d, j));
    z.weights.push_back(0.5 * (b.upper(j) - b.lower(j)));
  }
  return z;
}

ConvexSet zonotope_set(Zonotope z) {
  return ConvexSet::zonotope(std::move(z.center), std::move(z.generators), std::move(z.weights));
}

Vec singleton_point(const ConvexSet& c) {
  if (const auto* p = c.as<VertexPolytope>()) return p->vertices.front();
  if (const auto* z = c.as<Zonotope>()) return z->center;
  if (const auto* b = c.as<Ball>()) return b->center;
  return c.as<Box>()->lower;
}

}  // namespace

namespace detail {

bool has_exact_vertices(const ConvexSet& c) {
  if (c.dim() == 1) return true;
  if (const auto* b = c.as<Ball>()) return b->radius == 0.0;
  if (c.dim() > 2) {
    if (const auto* z = c.as<Zonotope>()) return z->generators.size() <= kMaxZonotopeEnumeration;
    if (c.as<Box>() != nullptr) return c.dim() <= kMaxCornerDim;
  }
  return true;
}

}  // namespace detail

std::pair<double, double> interval_bounds(const ConvexSet& c) {
  if (c.dim() != 1) throw DimensionMismatch("interval_bounds: set is not one-dimensional");
  if (const auto* p = c.as<VertexPolytope>()) return {p->vertices.front()(0), p->vertices.back()(0)};
  if (const auto* z = c.as<Zonotope>()) {
    double r = 0.0;
    for (std::size_t k = 0; k < z->generators.size(); ++k) r += std::abs(z->weights[k] * z->generators[k](0));
    return {z->center(0) - r, z->center(0) + r};
  }
  if (const auto* b = c.as<Ball>()) return {b->center(0) - b->radius, b->center(0) + b->radius};
  const auto* bx = c.as<Box>();
  return {bx->lower(0), bx->upper(0)};
}

std::vector<Vec> direction_grid(int dim, int count) {
  std::vector<Vec> dirs;
  if (dim == 1) return {Vec::Constant(1, -1.0), Vec::Constant(1, 1.0)};
  if (dim == 2) {
    dirs.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
      const double t = 2.0 * std::numbers::pi * k / count;
      dirs.emplace_back(Vec{{std::cos(t), std::sin(t)}});
    }
    return dirs;
  }
  for (int j = 0; j < dim; ++j) {
    dirs.push_back(Vec::Unit(dim, j));
    dirs.push_back(-Vec::Unit(dim, j));
  }
  std::mt19937_64 engine(0x5e75a7ULL + static_cast<std::uint64_t>(dim));
  std::normal_distribution<double> normal;
  while (static_cast<int>(dirs.size()) < count) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = normal(engine);
    const double n = v.norm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

double support(const ConvexSet& c, const Vec& u) {
  require_same_dim(u.size(), c.dim(), "support");
  if (const auto* p = c.as<VertexPolytope>()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : p->vertices) best = std::max(best, u.dot(v));
    return best;
  }
  if (const auto* z = c.as<Zonotope>()) {
    double h = u.dot(z->center);
    for (std::size_t k = 0; k < z->generators.size(); ++k) h += std::abs(z->weights[k]) * std::abs(u.dot(z->generators[k]));
    return h;
  }
  if (const auto* b = c.as<Ball>()) return u.dot(b->center) + b->radius * u.norm();
  const auto* bx = c.as<Box>();
  double h = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) h += std::max(u(j) * bx->lower(j), u(j) * bx->upper(j));
  return h;
}

Vec support_point(const ConvexSet& c, const Vec& u) {
  require_same_dim(u.size(), c.dim(), "support_point");
  if (const auto* p = c.as<VertexPolytope>()) {
    std::size_t best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p->vertices.size(); ++i) {
      const double v = u.dot(p->vertices[i]);
      if (v > best_val) {
        best_val = v;
        best = i;
      }
    }
    return p->vertices[best];
  }
  if (const auto* z = c.as<Zonotope>()) {
    Vec v = z->center;
    for (std::size_t k = 0; k < z->generators.size(); ++k) {
      const double s = u.dot(z->generators[k]) >= 0.0 ? 1.0 : -1.0;
      v += s * std::abs(z->weights[k]) * z->generators[k];
    }
    return v;
  }
  if (const auto* b = c.as<Ball>()) {
    const double n = u.norm();
    if (n == 0.0) return b->center;
    return b->center + (b->radius / n) * u;
  }
  const auto* bx = c.as<Box>();
  Vec v(u.size());
  for (Eigen::Index j = 0; j < u.size(); ++j) v(j) = u(j) >= 0.0 ? bx->upper(j) : bx->lower(j);
  return v;
}

std::vector<Vec> vertex_list(const ConvexSet& c, bool* exact) {
  if (exact != nullptr) *exact = true;
  if (c.dim() == 1) {
    const auto [lo, hi] = interval_bounds(c);
    std::vector<Vec> out{Vec::Constant(1, lo)};
    if (hi > lo) out.push_back(Vec::Constant(1, hi));
    return out;
  }
  if (const auto* p = c.as<VertexPolytope>()) return p->vertices;
  if (const auto* bx = c.as<Box>()) {
    if (c.dim() == 2) {
      return detail::from_points(planar::convex_hull(detail::to_points(box_corners(*bx))));
    }
    return box_corners(*bx);
  }
  if (const auto* z = c.as<Zonotope>()) {
    if (c.dim() == 2) return zonotope_vertices_2d(*z);
    return zonotope_vertices_enumerated(*z);
  }
  const auto* b = c.as<Ball>();
  if (b->radius == 0.0) return {b->center};
  if (exact != nullptr) *exact = false;
  if (c.dim() == 2) return ball_polygon(*b, kBallPolygonVertices);
  return support_sample(c);
}

ConvexSet to_polytope(const ConvexSet& c) {
  if (c.as<VertexPolytope>() != nullptr) return c;
  return ConvexSet::polytope(vertex_list(c));
}

ConvexSet translate(const ConvexSet& c, const Vec& v) {
  require_same_dim(v.size(), c.dim(), "translate");
  if (const auto* p = c.as<VertexPolytope>()) {
    std::vector<Vec> verts = p->vertices;
    for (auto& x : verts) x += v;
    return ConvexSet::polytope(std::move(verts));
  }
  if (const auto* z = c.as<Zonotope>()) return ConvexSet::zonotope(z->center + v, z->generators, z->weights);
  if (const auto* b = c.as<Ball>()) return ConvexSet::ball(b->center + v, b->radius);
  const auto* bx = c.as<Box>();
  return ConvexSet::box(bx->lower + v, bx->upper + v);
}

ConvexSet minkowski_sum(const ConvexSet& a, const ConvexSet& b) {
  require_same_dim(a.dim(), b.dim(), "minkowski_sum");
  const int d = a.dim();
  if (b.is_singleton()) return translate(a, singleton_point(b));
  if (a.is_singleton()) return translate(b, singleton_point(a));

  const auto* ba = a.as<Box>();
  const auto* bb = b.as<Box>();
  if (ba != nullptr && bb != nullptr) return ConvexSet::box(ba->lower + bb->lower, ba->upper + bb->upper);
  const auto* la = a.as<Ball>();
  const auto* lb = b.as<Ball>();
  if (la != nullptr && lb != nullptr) return ConvexSet::ball(la->center + lb->center, la->radius + lb->radius);

  const auto* za = a.as<Zonotope>();
  const auto* zb = b.as<Zonotope>();
  if ((za != nullptr || ba != nullptr) && (zb != nullptr || bb != nullptr)) {
    Zonotope lhs = za != nullptr ? *za : box_as_zonotope(*ba);
    const Zonotope rhs = zb != nullptr ? *zb : box_as_zonotope(*bb);
    lhs.center += rhs.center;
    lhs.generators.insert(lhs.generators.end(), rhs.generators.begin(), rhs.generators.end());
    lhs.weights.insert(lhs.weights.end(), rhs.weights.begin(), rhs.weights.end());
    return zonotope_set(std::move(lhs));
  }

  if (d == 1) {
    const auto [alo, ahi] = interval_bounds(a);
    const auto [blo, bhi] = interval_bounds(b);
    return ConvexSet::interval(alo + blo, ahi + bhi);
  }
  if (d == 2) {
    const auto pa = detail::to_points(vertex_list(a));
    const auto pb = detail::to_points(vertex_list(b));
    return ConvexSet::polytope(detail::from_points(planar::minkowski_sum(pa, pb)));
  }
  if (detail::has_exact_vertices(a) && detail::has_exact_vertices(b) &&
      (a.as<VertexPolytope>() != nullptr || b.as<VertexPolytope>() != nullptr)) {
    const auto va = vertex_list(a);
    const auto vb = vertex_list(b);
    std::vector<Vec> sums;
    sums.reserve(va.size() * vb.size());
    for (const auto& p : va)
      for (const auto& q : vb) sums.push_back(p + q);
    return ConvexSet::polytope(std::move(sums));
  }
  return ConvexSet::polytope(support_sample(a, &b));
}

ConvexSet scale(double factor, const ConvexSet& c) {
  if (!std::isfinite(factor)) throw InvalidArgument("scale: non-finite factor");
  if (const auto* p = c.as<VertexPolytope>()) {
    std::vector<Vec> verts = p->vertices;
    for (auto& v : verts) v *= factor;
    return ConvexSet::polytope(std::move(verts));
  }
  if (const auto* z = c.as<Zonotope>()) {
    std::vector<double> w = z->weights;
    for (auto& x : w) x *= factor;
    return ConvexSet::zonotope(factor * z->center, z->generators, std::move(w));
  }
  if (const auto* b = c.as<Ball>()) return ConvexSet::ball(factor * b->center, std::abs(factor) * b->radius);
  const auto* bx = c.as<Box>();
  if (factor >= 0.0) return ConvexSet::box(factor * bx->lower, factor * bx->upper);
  return ConvexSet::box(factor * bx->upper, factor * bx->lower);
}

ConvexSet scale(const Mat& psi, const ConvexSet& c) {
  if (psi.rows() != psi.cols()) throw DimensionMismatch("scale: matrix must be square");
  require_same_dim(psi.cols(), c.dim(), "scale");
  if (!psi.allFinite()) throw InvalidArgument("scale: non-finite matrix entry");
  const int d = c.dim();
  if (const auto* p = c.as<VertexPolytope>()) {
    std::vector<Vec> verts;
    verts.reserve(p->vertices.size());
    for (const auto& v : p->vertices) verts.push_back(psi * v);
    return ConvexSet::polytope(std::move(verts));
  }
  if (const auto* z = c.as<Zonotope>()) {
    std::vector<Vec> gens;
    gens.reserve(z->generators.size());
    for (const auto& g : z->generators) gens.push_back(psi * g);
    return ConvexSet::zonotope(psi * z->center, std::move(gens), z->weights);
  }
  if (const auto* bx = c.as<Box>()) {
    const Mat off = psi - Mat(psi.diagonal().asDiagonal());
    if (off.isZero(0.0)) {
      const Vec a = psi.diagonal().cwiseProduct(bx->lower);
      const Vec b = psi.diagonal().cwiseProduct(bx->upper);
      return ConvexSet::box(a.cwiseMin(b), a.cwiseMax(b));
    }
    if (d <= 2) {
      std::vector<Vec> verts;
      for (const auto& v : box_corners(*bx)) verts.push_back(psi * v);
      return ConvexSet::polytope(std::move(verts));
    }
    Zonotope z = box_as_zonotope(*bx);
    z.center = psi * z.center;
    for (auto& g : z.generators) g = psi * g;
    return zonotope_set(std::move(z));
  }
  const auto* b = c.as<Ball>();
  const Mat gram = psi.transpose() * psi;
  const double alpha2 = gram(0, 0);
  if ((gram - alpha2 * Mat::Identity(d, d)).norm() <= 1e-12 * (1.0 + alpha2)) {
    return ConvexSet::ball(psi * b->center, std::sqrt(alpha2) * b->radius);
  }
  // Non-isometric image of a ball: support-sampled polytope.
  std::vector<Vec> verts;
  for (const auto& v : vertex_list(c)) verts.push_back(psi * v);
  return ConvexSet::polytope(std::move(verts));
}

std::optional<ConvexSet> minkowski_diff(const ConvexSet& c, const ConvexSet& d) {
  require_same_dim(c.dim(), d.dim(), "minkowski_diff");
  if (d.is_singleton()) return translate(c, -singleton_point(d));
  const int dim = c.dim();

  if (dim == 1) {
    const auto [clo, chi] = interval_bounds(c);
    const auto [dlo, dhi] = interval_bounds(d);
    double lo = clo - dlo;
    double hi = chi - dhi;
    const double tol = 1e-12 * (1.0 + std::max({std::abs(clo), std::abs(chi), std::abs(dlo), std::abs(dhi)}));
    if (lo > hi + tol) return std::nullopt;
    if (lo > hi) lo = hi = 0.5 * (lo + hi);
    if (c.as<Box>() != nullptr && d.as<Box>() != nullptr) return ConvexSet::box(Vec::Constant(1, lo), Vec::Constant(1, hi));
    return ConvexSet::interval(lo, hi);
  }
  const auto* bc = c.as<Box>();
  const auto* bd = d.as<Box>();
  if (bc != nullptr && bd != nullptr) {
    Vec lo = bc->lower - bd->lower;
    Vec hi = bc->upper - bd->upper;
    const double scale = std::max(bc->lower.cwiseAbs().maxCoeff(), bc->upper.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * (1.0 + scale);
    for (Eigen::Index j = 0; j < lo.size(); ++j) {
      if (lo(j) > hi(j) + tol) return std::nullopt;
      if (lo(j) > hi(j)) lo(j) = hi(j) = 0.5 * (lo(j) + hi(j));
    }
    return ConvexSet::box(std::move(lo), std::move(hi));
  }
  const auto* lc = c.as<Ball>();
  const auto* ld = d.as<Ball>();
  if (lc != nullptr && ld != nullptr) {
    const double tol = 1e-12 * (1.0 + lc->radius);
    if (lc->radius + tol < ld->radius) return std::nullopt;
    return ConvexSet::ball(lc->center - ld->center, std::max(0.0, lc->radius - ld->radius));
  }
  if (dim != 2) throw Unsupported("minkowski_diff: only box, ball and singleton operands in d > 2");

  // Erode every facet of C by the support of D.
  const auto verts = vertex_list(c);
  auto planes = planar::halfplanes(detail::to_points(verts));
  for (auto& hp : planes) hp.offset -= support(d, Vec{{hp.normal.x(), hp.normal.y()}});
  const Vec anchor = support_point(d, Vec{{1.0, 0.0}});
  double scale = detail::coordinate_scale(verts);
  scale = std::max(scale, anchor.cwiseAbs().maxCoeff());
  planar::Point lo(std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
  planar::Point hi = -lo;
  for (const auto& v : verts) {
    const planar::Point p(v(0) - anchor(0), v(1) - anchor(1));
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const planar::Point pad = planar::Point::Constant(1.0 + scale);
  const double tol = 1e-11 * (1.0 + scale);
  auto poly = planar::intersect(planes, lo - pad, hi + pad, tol);
  if (poly.empty()) return std::nullopt;
  return ConvexSet::polytope(detail::from_points(poly));
}

ConvexSet weighted_minkowski_average(std::span<const double> weights, std::span<const ConvexSet> sets,
                                     bool allow_all_zero) {
  if (weights.size() != sets.size()) throw InvalidArgument("weighted_minkowski_average: length mismatch");
  if (sets.empty()) throw InvalidArgument("weighted_minkowski_average: no sets");
  const int d = sets.front().dim();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    require_same_dim(sets[i].dim(), d, "weighted_minkowski_average");
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw InvalidArgument("weighted_minkowski_average: weights must be finite and nonnegative");
    }
    if (weights[i] > 0.0) active.push_back(i);
  }
  if (active.empty()) {
    if (allow_all_zero) return ConvexSet::point(Vec::Zero(d));
    throw InvalidArgument("weighted_minkowski_average: all weights are zero");
  }

  const auto all_of = [&](auto pred) {
    return std::all_of(active.begin(), active.end(), [&](std::size_t i) { return pred(sets[i]); });
  };

  if (all_of([](const ConvexSet& s) { return s.as<Box>() != nullptr; })) {
    Vec lo = Vec::Zero(d);
    Vec hi = Vec::Zero(d);
    for (auto i : active) {
      lo += weights[i] * sets[i].as<Box>()->lower;
      hi += weights[i] * sets[i].as<Box>()->upper;
    }
    return ConvexSet::box(lo.cwiseMin(hi), lo.cwiseMax(hi));
  }
  if (all_of([](const ConvexSet& s) { return s.as<Ball>() != nullptr; })) {
    Vec c = Vec::Zero(d);
    double r = 0.0;
    for (auto i : active) {
      c += weights[i] * sets[i].as<Ball>()->center;
      r += weights[i] * sets[i].as<Ball>()->radius;
    }
    return ConvexSet::ball(std::move(c), r);
  }
  const auto* z0 = sets[active.front()].as<Zonotope>();
  if (z0 != nullptr && all_of([z0](const ConvexSet& s) {
        const auto* z = s.as<Zonotope>();
        return z != nullptr && same_generators(*z, *z0);
      })) {
    Zonotope out{Vec::Zero(d), z0->generators, std::vector<double>(z0->generators.size(), 0.0)};
    for (auto i : active) {
      const auto* z = sets[i].as<Zonotope>();
      out.center += weights[i] * z->center;
      for (std::size_t k = 0; k < z->weights.size(); ++k) out.weights[k] += weights[i] * std::abs(z->weights[k]);
    }
    return zonotope_set(std::move(out));
  }
  if (d == 1) {
    double lo = 0.0;
    double hi = 0.0;
    for (auto i : active) {
      const auto [a, b] = interval_bounds(sets[i]);
      lo += weights[i] * a;
      hi += weights[i] * b;
    }
    return ConvexSet::interval(lo, std::max(lo, hi));
  }
  if (d == 2) {
    // Pairwise sum-then-hull; the accumulator stays a hull throughout.
    std::vector<planar::Point> acc;
    for (auto i : active) {
      auto pts = detail::to_points(vertex_list(sets[i]));
      for (auto& p : pts) p *= weights[i];
      acc = acc.empty() ? planar::convex_hull(std::move(pts)) : planar::minkowski_sum(acc, pts);
    }
    return ConvexSet::polytope(detail::from_points(acc));
  }
  ConvexSet acc = scale(weights[active.front()], sets[active.front()]);
  for (std::size_t k = 1; k < active.size(); ++k) {
    acc = minkowski_sum(acc, scale(weights[active[k]], sets[active[k]]));
  }
  return acc;
}

ConvexSet convex_hull_union(const ConvexSet& a, const ConvexSet& b) {
  require_same_dim(a.dim(), b.dim(), "convex_hull_union");
  if (a.dim() == 1) {
    const auto [alo, ahi] = interval_bounds(a);
    const auto [blo, bhi] = interval_bounds(b);
    return ConvexSet::interval(std::min(alo, blo), std::max(ahi, bhi));
  }
  if (a.dim() > 2 && !(detail::has_exact_vertices(a) && detail::has_exact_vertices(b))) {
    throw Unsupported("convex_hull_union: balls in d > 2");
  }
  auto verts = vertex_list(a);
  const auto vb = vertex_list(b);
  verts.insert(verts.end(), vb.begin(), vb.end());
  return ConvexSet::polytope(std::move(verts));
}

std::optional<ConvexSet> intersect_halfspace(const ConvexSet& c, const Vec& normal, double offset) {
  require_same_dim(normal.size(), c.dim(), "intersect_halfspace");
  const auto verts = vertex_list(c);
  const double tol = 1e-12 * (1.0 + detail::coordinate_scale(verts) + std::abs(offset));
  if (c.dim() == 1) {
    auto [lo, hi] = interval_bounds(c);
    const double a = normal(0);
    if (a > 0.0) hi = std::min(hi, offset / a);
    else if (a < 0.0) lo = std::max(lo, offset / a);
    else if (offset < -tol) return std::nullopt;
    if (lo > hi + tol) return std::nullopt;
    return ConvexSet::interval(lo, std::max(lo, hi));
  }
  if (c.dim() != 2) throw Unsupported("intersect_halfspace: d > 2");
  const planar::HalfPlane hp{{normal(0), normal(1)}, offset};
  auto poly = planar::clip(planar::convex_hull(detail::to_points(verts)), hp, tol);
  if (poly.empty()) return std::nullopt;
  return ConvexSet::polytope(detail::from_points(poly));
}

std::optional<ConvexSet> intersect(const ConvexSet& a, const ConvexSet& b) {
  require_same_dim(a.dim(), b.dim(), "intersect");
  const auto* ba = a.as<Box>();
  const auto* bb = b.as<Box>();
  if (ba != nullptr && bb != nullptr) {
    const Vec lo = ba->lower.cwiseMax(bb->lower);
    const Vec hi = ba->upper.cwiseMin(bb->upper);
    if ((lo.array() > hi.array()).any()) return std::nullopt;
    return ConvexSet::box(lo, hi);
  }
  if (a.dim() == 1) {
    const auto [alo, ahi] = interval_bounds(a);
    const auto [blo, bhi] = interval_bounds(b);
    const double lo = std::max(alo, blo);
    const double hi = std::min(ahi, bhi);
    if (lo > hi) return std::nullopt;
    return ConvexSet::interval(lo, hi);
  }
  if (a.dim() != 2) throw Unsupported("intersect: only boxes in d > 2");
  const auto va = vertex_list(a);
  const auto vb = vertex_list(b);
  const double tol = 1e-12 * (1.0 + std::max(detail::coordinate_scale(va), detail::coordinate_scale(vb)));
  auto poly = planar::convex_hull(detail::to_points(va));
  for (const auto& hp : planar::halfplanes(planar::convex_hull(detail::to_points(vb)))) {
    poly = planar::clip(poly, hp, tol);
    if (poly.empty()) return std::nullopt;
  }
  return ConvexSet::polytope(detail::from_points(poly));
}

}  // namespace setstat
