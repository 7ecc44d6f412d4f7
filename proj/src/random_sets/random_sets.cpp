#include "setstat/random_sets.hpp"

#include <algorithm>
#include <cmath>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/parallel.hpp"

namespace setstat {

namespace {

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double set_diameter(const ConvexSet& c) {
  if (const auto* b = c.as<Box>()) return (b->upper - b->lower).norm();
  if (const auto* b = c.as<Ball>()) return 2.0 * b->radius;
  const auto verts = vertex_list(c);
  double d = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) d = std::max(d, (verts[i] - verts[j]).norm());
  return d;
}

Vec set_centroid(const ConvexSet& c) {
  if (const auto* b = c.as<Box>()) return 0.5 * (b->lower + b->upper);
  if (const auto* b = c.as<Ball>()) return b->center;
  if (const auto* z = c.as<Zonotope>()) return z->center;
  const auto& verts = c.as<VertexPolytope>()->vertices;
  Vec m = Vec::Zero(c.dim());
  for (const auto& v : verts) m += v;
  return m / static_cast<double>(verts.size());
}

void require_positive(long n, const char* what) {
  if (n < 1) throw InvalidArgument(std::string(what) + " must be >= 1");
}

}  // namespace

std::vector<Vec> sample_noise(const NoiseDistribution& noise, int n, const RngSeed& seed) {
  require_positive(n, "sample count");
  auto engine = seed.engine();
  std::vector<Vec> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out.push_back(noise.sample(engine));
  return out;
}

std::vector<ConvexSet> sample_rats(const RaTSModel& model, int n, const RngSeed& seed) {
  require_same_dim(model.body.dim(), model.noise.dim(), "sample_rats");
  std::vector<ConvexSet> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (const auto& xi : sample_noise(model.noise, n, seed)) out.push_back(translate(model.body, xi));
  return out;
}

ConvexSet selection_expectation_rats(const RaTSModel& model) {
  require_same_dim(model.body.dim(), model.noise.dim(), "selection_expectation_rats");
  return translate(model.body, model.noise.mean());
}

ConvexSet minkowski_mean(const RaTSModel& model, int n, const RngSeed& seed) {
  const auto sets = sample_rats(model, n, seed);
  const std::vector<double> weights(sets.size(), 1.0 / n);
  return weighted_minkowski_average(weights, sets);
}

std::vector<SllnRow> slln_curve(const RaTSModel& model, const std::vector<long>& n_values, int replicates,
                                const RngSeed& seed) {
  require_positive(replicates, "replicates");
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    require_positive(n_values[k], "n");
    if (k > 0 && n_values[k] <= n_values[k - 1]) throw InvalidArgument("slln_curve: n values must increase");
  }
  const ConvexSet expected = selection_expectation_rats(model);
  std::vector<SllnRow> rows;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    SllnRow row;
    row.n = n_values[k];
    row.errors.assign(static_cast<std::size_t>(replicates), 0.0);
    const RngSeed base = seed.child(k);
    parallel_for(row.errors.size(), [&](std::size_t r) {
      const auto avg = minkowski_mean(model, static_cast<int>(row.n), base.child(r));
      row.errors[r] = hausdorff(avg, expected);
    });
    double sum = 0.0;
    for (double e : row.errors) sum += e;
    row.mean_error = sum / replicates;
    row.median_error = median_of(row.errors);
    rows.push_back(std::move(row));
  }
  return rows;
}

double loglog_slope(const std::vector<SllnRow>& rows) {
  if (rows.size() < 2) throw InvalidArgument("loglog_slope: need at least two rows");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& r : rows) {
    if (!(r.mean_error > 0.0)) throw InvalidArgument("loglog_slope: errors must be positive");
    const double x = std::log(static_cast<double>(r.n));
    const double y = std::log(r.mean_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(rows.size());
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::vector<Vec> clt_rats_replicates(const RaTSModel& model, int n, int replicates, const RngSeed& seed) {
  require_positive(n, "n");
  require_positive(replicates, "replicates");
  if (!model.noise.mean().isZero(0.0)) throw InvalidArgument("clt_rats_replicates: noise must have zero mean");
  const ConvexSet expected = selection_expectation_rats(model);
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<Vec> out(static_cast<std::size_t>(replicates));
  parallel_for(out.size(), [&](std::size_t r) {
    const auto avg = minkowski_mean(model, n, seed.child(r));
    const auto diff = minkowski_diff(avg, expected);
    if (!diff) throw InternalConsistencyError("clt_rats_replicates: empty difference of a translate");
    const auto verts = vertex_list(avg);
    double scale = 1.0;
    for (const auto& v : verts) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    if (set_diameter(*diff) > 1e-8 * scale) {
      throw InternalConsistencyError("clt_rats_replicates: difference is not a singleton");
    }
    out[r] = root_n * set_centroid(*diff);
  });
  return out;
}

std::vector<double> weil_statistic_replicates(const RaTSModel& model, int n, int replicates, const RngSeed& seed) {
  require_positive(n, "n");
  require_positive(replicates, "replicates");
  const ConvexSet expected = selection_expectation_rats(model);
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> out(static_cast<std::size_t>(replicates));
  parallel_for(out.size(), [&](std::size_t r) {
    out[r] = root_n * hausdorff(minkowski_mean(model, n, seed.child(r)), expected);
  });
  return out;
}

Mat sample_covariance(const std::vector<Vec>& xs) {
  if (xs.size() < 2) throw InvalidArgument("sample_covariance: need at least two vectors");
  const auto d = xs.front().size();
  Vec mean = Vec::Zero(d);
  for (const auto& x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  Mat cov = Mat::Zero(d, d);
  for (const auto& x : xs) cov += (x - mean) * (x - mean).transpose();
  return cov / static_cast<double>(xs.size() - 1);
}

}  // namespace setstat
