#pragma once

#include <variant>

#include "setstat/convex_set.hpp"
#include "setstat/rng.hpp"

namespace setstat {

struct ZeroNoise {
  int dim = 1;
};

struct UniformBoxNoise {
  Vec lower;
  Vec upper;
};

/// Uniform on the centred ball of the given radius.
struct UniformBallNoise {
  int dim = 1;
  double radius = 1.0;
};

/// 1-D symmetric triangular density on [-halfwidth, halfwidth].
struct TriangularNoise {
  double halfwidth = 1.0;
};

/// N(0, covariance) conditioned on the Mahalanobis radius being <= radius.
struct TruncatedGaussianNoise {
  Mat covariance;
  double radius = 3.0;
};

/// Bounded vector noise with closed-form mean and covariance.
class NoiseDistribution {
 public:
  using Repr = std::variant<ZeroNoise, UniformBoxNoise, UniformBallNoise, TriangularNoise, TruncatedGaussianNoise>;

  static NoiseDistribution zero(int dim);
  static NoiseDistribution uniform_box(Vec lower, Vec upper);
  static NoiseDistribution uniform_interval(double lo, double hi);
  static NoiseDistribution uniform_ball(int dim, double radius);
  static NoiseDistribution triangular(double halfwidth);
  static NoiseDistribution truncated_gaussian(Mat covariance, double radius);

  int dim() const noexcept { return dim_; }
  const Repr& repr() const noexcept { return repr_; }

  Vec mean() const;
  /// E((xi - mean)(xi - mean)^T).
  Mat covariance() const;
  /// Second moment E(xi xi^T).
  Mat second_moment() const;

  /// A box containing the support.
  ConvexSet support_box() const;

  Vec sample(Engine& engine) const;

  /// Density of a 1-D distribution (0 outside the support).
  double density_1d(double x) const;

  bool is_zero() const noexcept { return std::holds_alternative<ZeroNoise>(repr_); }

 private:
  NoiseDistribution(Repr repr, int dim) : repr_(std::move(repr)), dim_(dim) {}

  Repr repr_;
  int dim_ = 1;
  Mat chol_;  // truncated Gaussian only
};

}  // namespace setstat
