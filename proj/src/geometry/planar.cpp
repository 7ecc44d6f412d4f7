#include "setstat/planar.hpp"

#include <algorithm>
#include <cmath>

namespace setstat::planar {
namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

// Counter-clockwise turn a -> b -> c beyond the relative collinearity tolerance.
bool left_turn(const Point& a, const Point& b, const Point& c) {
  const Point ab = b - a;
  const Point ac = c - a;
  return cross(ab, ac) > kCollinearTol * ab.norm() * ac.norm();
}

double coordinate_scale(const std::vector<Point>& pts) {
  double s = 0.0;
  for (const auto& p : pts) s = std::max(s, p.cwiseAbs().maxCoeff());
  return s;
}

// Rotate so the vertex with smallest (y, x) comes first.
std::vector<Point> from_bottom(const std::vector<Point>& poly) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < poly.size(); ++i) {
    if (poly[i].y() < poly[best].y() ||
        (poly[i].y() == poly[best].y() && poly[i].x() < poly[best].x())) {
      best = i;
    }
  }
  std::vector<Point> out(poly.begin() + static_cast<long>(best), poly.end());
  out.insert(out.end(), poly.begin(), poly.begin() + static_cast<long>(best));
  return out;
}

}  // namespace

std::vector<Point> convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() <= 1) return points;

  std::vector<Point> hull;
  hull.reserve(2 * points.size());
  for (const auto& p : points) {
    while (hull.size() >= 2 && !left_turn(hull[hull.size() - 2], hull.back(), p)) hull.pop_back();
    hull.push_back(p);
  }
  const std::size_t lower_size = hull.size() + 1;
  for (auto it = points.rbegin() + 1; it != points.rend(); ++it) {
    while (hull.size() >= lower_size && !left_turn(hull[hull.size() - 2], hull.back(), *it)) {
      hull.pop_back();
    }
    hull.push_back(*it);
  }
  hull.pop_back();

  // Merge vertices that coincide up to rounding.
  const double merge_tol = kCollinearTol * (1.0 + coordinate_scale(hull));
  std::vector<Point> out;
  out.reserve(hull.size());
  for (const auto& p : hull) {
    if (out.empty() || (p - out.back()).norm() > merge_tol) out.push_back(p);
  }
  while (out.size() > 1 && (out.back() - out.front()).norm() <= merge_tol) out.pop_back();
  return out;
}

std::vector<Point> minkowski_sum(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.size() < 3 || b.size() < 3) {
    std::vector<Point> sums;
    sums.reserve(a.size() * b.size());
    for (const auto& p : a)
      for (const auto& q : b) sums.push_back(p + q);
    return convex_hull(std::move(sums));
  }
  // Merge the edge sequences by polar angle.
  auto p = from_bottom(a);
  auto q = from_bottom(b);
  const std::size_t n = p.size();
  const std::size_t m = q.size();
  p.push_back(p[0]);
  p.push_back(p[1]);
  q.push_back(q[0]);
  q.push_back(q[1]);
  std::vector<Point> out;
  out.reserve(n + m);
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < n || j < m) {
    out.push_back(p[i] + q[j]);
    const double c = cross(p[i + 1] - p[i], q[j + 1] - q[j]);
    if (c >= 0.0 && i < n) ++i;
    if (c <= 0.0 && j < m) ++j;
  }
  return convex_hull(std::move(out));
}

std::vector<HalfPlane> halfplanes(const std::vector<Point>& hull) {
  std::vector<HalfPlane> out;
  if (hull.empty()) return out;
  if (hull.size() == 1) {
    const Point& p = hull[0];
    out.push_back({Point(1, 0), p.x()});
    out.push_back({Point(-1, 0), -p.x()});
    out.push_back({Point(0, 1), p.y()});
    out.push_back({Point(0, -1), -p.y()});
    return out;
  }
  if (hull.size() == 2) {
    const Point dir = (hull[1] - hull[0]).normalized();
    const Point nrm(dir.y(), -dir.x());
    out.push_back({nrm, nrm.dot(hull[0])});
    out.push_back({-nrm, -nrm.dot(hull[0])});
    out.push_back({dir, dir.dot(hull[1])});
    out.push_back({-dir, -dir.dot(hull[0])});
    return out;
  }
  out.reserve(hull.size());
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Point& a = hull[i];
    const Point& b = hull[(i + 1) % hull.size()];
    const Point e = b - a;
    const Point nrm = Point(e.y(), -e.x()).normalized();
    out.push_back({nrm, nrm.dot(a)});
  }
  return out;
}

std::vector<Point> clip(const std::vector<Point>& polygon, const HalfPlane& hp, double tol) {
  std::vector<Point> out;
  const std::size_t n = polygon.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % n];
    const double da = hp.normal.dot(a) - hp.offset;
    const double db = hp.normal.dot(b) - hp.offset;
    const bool in_a = da <= tol;
    const bool in_b = db <= tol;
    if (in_a) out.push_back(a);
    if (in_a != in_b && n > 1) {
      const double s = std::clamp(da / (da - db), 0.0, 1.0);
      out.push_back(a + s * (b - a));
    }
  }
  return out;
}

std::vector<Point> intersect(const std::vector<HalfPlane>& planes, const Point& lo, const Point& hi,
                             double tol) {
  std::vector<Point> poly{lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())};
  for (const auto& hp : planes) {
    poly = clip(poly, hp, tol);
    if (poly.empty()) return poly;
  }
  return convex_hull(std::move(poly));
}

double diameter(const std::vector<Point>& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, (points[i] - points[j]).norm());
  return best;
}

}  // namespace setstat::planar
