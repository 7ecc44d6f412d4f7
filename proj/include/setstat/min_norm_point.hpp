#pragma once

#include <functional>
#include <span>

#include "setstat/convex_set.hpp"

namespace setstat {

struct MinNormOptions {
  /// Stop when <x, x - lmo(x)> <= gap_tol * max(1, scale^2).
  double gap_tol = 1e-10;
  int max_iterations = 1000;
};

struct MinNormResult {
  Vec point;
  double norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Linear minimisation oracle: returns argmin_{p in P} <direction, p>.
using LinearOracle = std::function<Vec(const Vec& direction)>;

/// Wolfe's minimum-norm-point algorithm over a polytope P given only by its
/// linear minimisation oracle. Each major step adds the oracle point, and the
/// minor loop walks to the affine minimiser of the active vertex subset,
/// dropping vertices whose barycentric weight vanishes.
MinNormResult min_norm_point(const LinearOracle& lmo, const Vec& start,
                             const MinNormOptions& options = {});

/// Same, over the convex hull of an explicit point list.
MinNormResult min_norm_point(std::span<const Vec> points, const MinNormOptions& options = {});

}  // namespace setstat
