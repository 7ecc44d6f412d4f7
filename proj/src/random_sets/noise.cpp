#include "setstat/noise.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "setstat/errors.hpp"

namespace setstat {

namespace {

double chi2_cdf(int k, double x) { return boost::math::gamma_p(0.5 * k, 0.5 * x); }

}  // namespace

NoiseDistribution NoiseDistribution::zero(int dim) {
  if (dim < 1) throw InvalidArgument("noise: dimension must be positive");
  return {ZeroNoise{dim}, dim};
}

NoiseDistribution NoiseDistribution::uniform_box(Vec lower, Vec upper) {
  require_same_dim(lower.size(), upper.size(), "uniform_box noise");
  if (lower.size() < 1) throw InvalidArgument("noise: dimension must be positive");
  if (!lower.allFinite() || !upper.allFinite() || (lower.array() > upper.array()).any()) {
    throw InvalidArgument("uniform_box noise: need finite lower <= upper");
  }
  const int d = static_cast<int>(lower.size());
  return {UniformBoxNoise{std::move(lower), std::move(upper)}, d};
}

NoiseDistribution NoiseDistribution::uniform_interval(double lo, double hi) {
  return uniform_box(Vec::Constant(1, lo), Vec::Constant(1, hi));
}

NoiseDistribution NoiseDistribution::uniform_ball(int dim, double radius) {
  if (dim < 1) throw InvalidArgument("noise: dimension must be positive");
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("uniform_ball noise: radius must be >= 0");
  return {UniformBallNoise{dim, radius}, dim};
}

NoiseDistribution NoiseDistribution::triangular(double halfwidth) {
  if (!(halfwidth >= 0.0) || !std::isfinite(halfwidth)) {
    throw InvalidArgument("triangular noise: halfwidth must be >= 0");
  }
  return {TriangularNoise{halfwidth}, 1};
}

NoiseDistribution NoiseDistribution::truncated_gaussian(Mat covariance, double radius) {
  if (covariance.rows() != covariance.cols() || covariance.rows() < 1) {
    throw InvalidArgument("truncated_gaussian noise: covariance must be square");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("truncated_gaussian noise: radius must be > 0");
  Eigen::LLT<Mat> llt(covariance);
  if (llt.info() != Eigen::Success || !covariance.isApprox(covariance.transpose())) {
    throw InvalidArgument("truncated_gaussian noise: covariance must be symmetric positive definite");
  }
  const int d = static_cast<int>(covariance.rows());
  NoiseDistribution out{TruncatedGaussianNoise{std::move(covariance), radius}, d};
  out.chol_ = llt.matrixL();
  return out;
}

Vec NoiseDistribution::mean() const {
  if (const auto* b = std::get_if<UniformBoxNoise>(&repr_)) return 0.5 * (b->lower + b->upper);
  return Vec::Zero(dim_);
}

Mat NoiseDistribution::covariance() const {
  const int d = dim_;
  if (const auto* b = std::get_if<UniformBoxNoise>(&repr_)) {
    const Vec w = b->upper - b->lower;
    return Mat((w.array().square() / 12.0).matrix().asDiagonal());
  }
  if (const auto* b = std::get_if<UniformBallNoise>(&repr_)) {
    return (b->radius * b->radius / (d + 2.0)) * Mat::Identity(d, d);
  }
  if (const auto* t = std::get_if<TriangularNoise>(&repr_)) {
    return Mat::Constant(1, 1, t->halfwidth * t->halfwidth / 6.0);
  }
  if (const auto* g = std::get_if<TruncatedGaussianNoise>(&repr_)) {
    const double r2 = g->radius * g->radius;
    return g->covariance * (chi2_cdf(d + 2, r2) / chi2_cdf(d, r2));
  }
  return Mat::Zero(d, d);
}

Mat NoiseDistribution::second_moment() const {
  const Vec m = mean();
  return covariance() + m * m.transpose();
}

ConvexSet NoiseDistribution::support_box() const {
  const int d = dim_;
  if (const auto* b = std::get_if<UniformBoxNoise>(&repr_)) return ConvexSet::box(b->lower, b->upper);
  Vec half = Vec::Zero(d);
  if (const auto* b = std::get_if<UniformBallNoise>(&repr_)) half.setConstant(b->radius);
  if (const auto* t = std::get_if<TriangularNoise>(&repr_)) half.setConstant(t->halfwidth);
  if (const auto* g = std::get_if<TruncatedGaussianNoise>(&repr_)) {
    half = g->radius * g->covariance.diagonal().cwiseSqrt();
  }
  return ConvexSet::box(-half, half);
}

Vec NoiseDistribution::sample(Engine& engine) const {
  const int d = dim_;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;
  if (const auto* b = std::get_if<UniformBoxNoise>(&repr_)) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v(j) = b->lower(j) + (b->upper(j) - b->lower(j)) * unif(engine);
    return v;
  }
  if (const auto* b = std::get_if<UniformBallNoise>(&repr_)) {
    Vec dir(d);
    double n = 0.0;
    do {
      for (int j = 0; j < d; ++j) dir(j) = normal(engine);
      n = dir.norm();
    } while (n == 0.0);
    return (b->radius * std::pow(unif(engine), 1.0 / d) / n) * dir;
  }
  if (const auto* t = std::get_if<TriangularNoise>(&repr_)) {
    const double u1 = unif(engine);
    const double u2 = unif(engine);
    return Vec::Constant(1, t->halfwidth * (u1 + u2 - 1.0));
  }
  if (const auto* g = std::get_if<TruncatedGaussianNoise>(&repr_)) {
    Vec z(d);
    do {
      for (int j = 0; j < d; ++j) z(j) = normal(engine);
    } while (z.norm() > g->radius);
    return chol_ * z;
  }
  return Vec::Zero(d);
}

double NoiseDistribution::density_1d(double x) const {
  if (dim_ != 1) throw Unsupported("density_1d: distribution is not one-dimensional");
  if (const auto* b = std::get_if<UniformBoxNoise>(&repr_)) {
    const double lo = b->lower(0);
    const double hi = b->upper(0);
    if (hi <= lo) throw Unsupported("density_1d: degenerate uniform has no density");
    return (x >= lo && x <= hi) ? 1.0 / (hi - lo) : 0.0;
  }
  if (const auto* b = std::get_if<UniformBallNoise>(&repr_)) {
    if (b->radius == 0.0) throw Unsupported("density_1d: degenerate uniform has no density");
    return std::abs(x) <= b->radius ? 0.5 / b->radius : 0.0;
  }
  if (const auto* t = std::get_if<TriangularNoise>(&repr_)) {
    const double a = t->halfwidth;
    if (a == 0.0) throw Unsupported("density_1d: degenerate triangular has no density");
    return std::abs(x) <= a ? (a - std::abs(x)) / (a * a) : 0.0;
  }
  if (const auto* g = std::get_if<TruncatedGaussianNoise>(&repr_)) {
    const double sigma = std::sqrt(g->covariance(0, 0));
    const double z = x / sigma;
    if (std::abs(z) > g->radius) return 0.0;
    const double mass = std::erf(g->radius / std::numbers::sqrt2);
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi) * mass);
  }
  throw Unsupported("density_1d: zero noise has no density");
}

}  // namespace setstat
