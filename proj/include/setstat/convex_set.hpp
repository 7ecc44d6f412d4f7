#pragma once

#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace setstat {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Convex hull of a finite point list. In d <= 2 the stored list is the
/// pruned extreme-point list (counter-clockwise in the plane, starting from
/// the lexicographically smallest vertex).
struct VertexPolytope {
  std::vector<Vec> vertices;
};

/// center + sum_k |weights[k]| * [-generators[k], generators[k]].
struct Zonotope {
  Vec center;
  std::vector<Vec> generators;
  std::vector<double> weights;
};

struct Ball {
  Vec center;
  double radius = 0.0;
};

struct Box {
  Vec lower;
  Vec upper;
};

/// A nonempty compact convex set in R^d held in one of four explicit
/// representations. Values are immutable once constructed; every factory
/// validates its input and throws InvalidArgument on violation.
class ConvexSet {
 public:
  using Repr = std::variant<VertexPolytope, Zonotope, Ball, Box>;

  static ConvexSet polytope(std::vector<Vec> vertices);
  static ConvexSet point(Vec p);
  static ConvexSet interval(double lo, double hi);
  static ConvexSet zonotope(Vec center, std::vector<Vec> generators, std::vector<double> weights);
  static ConvexSet ball(Vec center, double radius);
  static ConvexSet box(Vec lower, Vec upper);

  int dim() const noexcept { return dim_; }
  const Repr& repr() const noexcept { return repr_; }

  template <class T>
  const T* as() const noexcept {
    return std::get_if<T>(&repr_);
  }

  /// "vpoly", "zonotope", "ball" or "box".
  std::string_view type_name() const noexcept;

  /// True if the set is a single point (checked exactly on the representation).
  bool is_singleton() const noexcept;

 private:
  ConvexSet(Repr repr, int dim) : repr_(std::move(repr)), dim_(dim) {}

  Repr repr_;
  int dim_ = 0;
};

}  // namespace setstat
