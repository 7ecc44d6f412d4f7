#include "setstat/convex_set.hpp"

#include <algorithm>
#include <cmath>

#include "setstat/errors.hpp"
#include "setstat/planar.hpp"

namespace setstat {
namespace {

bool all_finite(const Vec& v) { return v.allFinite(); }

void require_finite(const Vec& v, const char* what) {
  if (!all_finite(v)) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

std::vector<Vec> prune_1d(const std::vector<Vec>& vertices) {
  double lo = vertices.front()(0);
  double hi = lo;
  for (const auto& v : vertices) {
    lo = std::min(lo, v(0));
    hi = std::max(hi, v(0));
  }
  std::vector<Vec> out{Vec::Constant(1, lo)};
  if (hi > lo) out.push_back(Vec::Constant(1, hi));
  return out;
}

std::vector<Vec> prune_2d(const std::vector<Vec>& vertices) {
  std::vector<planar::Point> pts;
  pts.reserve(vertices.size());
  for (const auto& v : vertices) pts.emplace_back(v(0), v(1));
  auto hull = planar::convex_hull(std::move(pts));
  std::vector<Vec> out;
  out.reserve(hull.size());
  for (const auto& p : hull) out.emplace_back(Vec{{p.x(), p.y()}});
  return out;
}

std::vector<Vec> dedupe(std::vector<Vec> vertices) {
  std::sort(vertices.begin(), vertices.end(), [](const Vec& a, const Vec& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  vertices.erase(std::unique(vertices.begin(), vertices.end(),
                             [](const Vec& a, const Vec& b) { return a == b; }),
                 vertices.end());
  return vertices;
}

}  // namespace

ConvexSet ConvexSet::polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw InvalidArgument("polytope: at least one vertex required");
  const auto d = vertices.front().size();
  if (d < 1) throw InvalidArgument("polytope: dimension must be positive");
  for (const auto& v : vertices) {
    require_same_dim(v.size(), d, "polytope");
    require_finite(v, "polytope");
  }
  if (d == 1) {
    vertices = prune_1d(vertices);
  } else if (d == 2) {
    vertices = prune_2d(vertices);
  } else {
    vertices = dedupe(std::move(vertices));
  }
  return ConvexSet(VertexPolytope{std::move(vertices)}, static_cast<int>(d));
}

ConvexSet ConvexSet::point(Vec p) { return polytope({std::move(p)}); }

ConvexSet ConvexSet::interval(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidArgument("interval: lower bound exceeds upper bound");
  return polytope({Vec::Constant(1, lo), Vec::Constant(1, hi)});
}

ConvexSet ConvexSet::zonotope(Vec center, std::vector<Vec> generators, std::vector<double> weights) {
  const auto d = center.size();
  if (d < 1) throw InvalidArgument("zonotope: dimension must be positive");
  require_finite(center, "zonotope center");
  if (generators.size() != weights.size()) {
    throw InvalidArgument("zonotope: generator and weight counts differ");
  }
  for (std::size_t k = 0; k < generators.size(); ++k) {
    require_same_dim(generators[k].size(), d, "zonotope");
    require_finite(generators[k], "zonotope generator");
    if (!std::isfinite(weights[k])) throw InvalidArgument("zonotope: non-finite weight");
  }
  return ConvexSet(Zonotope{std::move(center), std::move(generators), std::move(weights)},
                   static_cast<int>(d));
}

ConvexSet ConvexSet::ball(Vec center, double radius) {
  const auto d = center.size();
  if (d < 1) throw InvalidArgument("ball: dimension must be positive");
  require_finite(center, "ball center");
  if (!std::isfinite(radius) || radius < 0.0) {
    throw InvalidArgument("ball: radius must be finite and nonnegative");
  }
  return ConvexSet(Ball{std::move(center), radius}, static_cast<int>(d));
}

ConvexSet ConvexSet::box(Vec lower, Vec upper) {
  const auto d = lower.size();
  if (d < 1) throw InvalidArgument("box: dimension must be positive");
  require_same_dim(upper.size(), d, "box");
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  if ((lower.array() > upper.array()).any()) {
    throw InvalidArgument("box: lower bound exceeds upper bound");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)}, static_cast<int>(d));
}

std::string_view ConvexSet::type_name() const noexcept {
  switch (repr_.index()) {
    case 0: return "vpoly";
    case 1: return "zonotope";
    case 2: return "ball";
    default: return "box";
  }
}

bool ConvexSet::is_singleton() const noexcept {
  if (const auto* p = as<VertexPolytope>()) return p->vertices.size() == 1;
  if (const auto* z = as<Zonotope>()) {
    for (std::size_t k = 0; k < z->generators.size(); ++k) {
      if (z->weights[k] != 0.0 && !z->generators[k].isZero(0.0)) return false;
    }
    return true;
  }
  if (const auto* b = as<Ball>()) return b->radius == 0.0;
  const auto* bx = as<Box>();
  return bx->lower == bx->upper;
}

}  // namespace setstat
