#include "setstat/min_norm_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "setstat/errors.hpp"

namespace setstat {
namespace {

// Barycentric weights of the point of minimum norm in the affine hull of
// `active`, found as argmin |s0 + B beta| with B = [s_i - s0].
Eigen::VectorXd affine_minimizer(const std::vector<Vec>& active) {
  const auto k = static_cast<Eigen::Index>(active.size());
  Eigen::VectorXd alpha(k);
  if (k == 1) {
    alpha(0) = 1.0;
    return alpha;
  }
  const auto d = active.front().size();
  Mat b(d, k - 1);
  for (Eigen::Index i = 1; i < k; ++i) b.col(i - 1) = active[i] - active[0];
  const Eigen::VectorXd beta = b.colPivHouseholderQr().solve(-active[0]);
  alpha(0) = 1.0 - beta.sum();
  alpha.tail(k - 1) = beta;
  return alpha;
}

Vec combine(const std::vector<Vec>& active, const Eigen::VectorXd& weights) {
  Vec x = Vec::Zero(active.front().size());
  for (std::size_t i = 0; i < active.size(); ++i) x += weights(static_cast<Eigen::Index>(i)) * active[i];
  return x;
}

}  // namespace

MinNormResult min_norm_point(const LinearOracle& lmo, const Vec& start, const MinNormOptions& options) {
  std::vector<Vec> active{start};
  Eigen::VectorXd lambda = Eigen::VectorXd::Ones(1);
  Vec x = start;
  double scale2 = std::max(1.0, start.squaredNorm());
  constexpr double kPositive = 1e-14;

  MinNormResult result;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;
    const double xx = x.squaredNorm();
    if (xx <= 1e-30 * scale2) {
      result.converged = true;
      break;
    }
    Vec p = lmo(x);
    scale2 = std::max(scale2, p.squaredNorm());
    const double gap = xx - x.dot(p);
    if (gap <= options.gap_tol * scale2) {
      result.converged = true;
      break;
    }
    const bool repeated = std::any_of(active.begin(), active.end(), [&](const Vec& s) {
      return (s - p).squaredNorm() <= 1e-28 * scale2;
    });
    if (repeated) {
      // The oracle cannot improve on the current face; x is optimal up to rounding.
      result.converged = true;
      break;
    }
    active.push_back(std::move(p));
    lambda.conservativeResize(lambda.size() + 1);
    lambda(lambda.size() - 1) = 0.0;

    for (std::size_t minor = 0; minor <= active.size() + 1; ++minor) {
      const Eigen::VectorXd alpha = affine_minimizer(active);
      if ((alpha.array() > kPositive).all()) {
        lambda = alpha;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index i = 0; i < alpha.size(); ++i) {
        if (alpha(i) <= kPositive) {
          const double denom = lambda(i) - alpha(i);
          if (denom > 0.0) theta = std::min(theta, lambda(i) / denom);
        }
      }
      lambda = theta * alpha + (1.0 - theta) * lambda;
      std::vector<Vec> kept;
      std::vector<double> kept_lambda;
      for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > kPositive) {
          kept.push_back(active[static_cast<std::size_t>(i)]);
          kept_lambda.push_back(lambda(i));
        }
      }
      if (kept.empty()) {
        // Degenerate step; keep the newest point alone.
        kept.push_back(active.back());
        kept_lambda.push_back(1.0);
      }
      active = std::move(kept);
      lambda = Eigen::Map<Eigen::VectorXd>(kept_lambda.data(), static_cast<Eigen::Index>(kept_lambda.size()));
      lambda /= lambda.sum();
    }
    x = combine(active, lambda);
  }
  result.point = x;
  result.norm = x.norm();
  return result;
}

MinNormResult min_norm_point(std::span<const Vec> points, const MinNormOptions& options) {
  if (points.empty()) throw InvalidArgument("min_norm_point: empty point list");
  auto lmo = [points](const Vec& g) -> Vec {
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double v = g.dot(points[i]);
      if (v < best_val) {
        best_val = v;
        best = i;
      }
    }
    return points[best];
  };
  // Start from the point of smallest norm.
  std::size_t start = 0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;
  }
  return min_norm_point(lmo, points[start], options);
}

}  // namespace setstat
