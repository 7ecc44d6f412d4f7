#include "setstat/kernel_regression.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/parallel.hpp"
#include "setstat/set_io.hpp"

namespace setstat {

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

}  // namespace

double kernel_profile(Kernel k, double t) {
  const double a = std::abs(t);
  switch (k) {
    case Kernel::indicator: return a < 1.0 ? 0.5 : 0.0;
    case Kernel::epanechnikov: return a < 1.0 ? 0.75 * (1.0 - a * a) : 0.0;
  }
  return 0.0;
}

double kernel_family_eval(Kernel k, double h, const Vec& v) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("kernel bandwidth h must be > 0");
  const double t = v.norm() / h;
  if (t >= 1.0) return 0.0;
  return std::pow(h, -static_cast<double>(v.size())) * kernel_profile(k, t);
}

double default_bandwidth(long n, int d) {
  if (n < 1 || d < 1) throw InvalidArgument("default_bandwidth: need n >= 1 and d >= 1");
  return std::pow(static_cast<double>(n), -1.0 / (d + 4.0));
}

int SetRegressionDataset::input_dim() const {
  validate();
  return static_cast<int>(samples.front().x.size());
}

int SetRegressionDataset::set_dim() const {
  validate();
  return samples.front().set.dim();
}

void SetRegressionDataset::validate() const {
  if (samples.empty()) throw InvalidArgument("dataset: no samples");
  const auto dx = samples.front().x.size();
  const int ds = samples.front().set.dim();
  if (dx < 1) throw InvalidArgument("dataset: empty input vector");
  for (const auto& s : samples) {
    if (s.x.size() != dx || s.set.dim() != ds) throw DimensionMismatch("dataset: inconsistent dimensions");
    if (!s.x.allFinite()) throw InvalidArgument("dataset: non-finite input");
  }
}

ConvexSet estimate(const SetRegressionDataset& data, Kernel kernel, const Vec& u, double h) {
  data.validate();
  require_same_dim(u.size(), data.samples.front().x.size(), "estimate");
  std::vector<double> weights;
  std::vector<ConvexSet> sets;
  double mass = 0.0;
  for (const auto& s : data.samples) {
    const double w = kernel_family_eval(kernel, h, s.x - u);
    if (w > 0.0) {
      weights.push_back(w);
      sets.push_back(s.set);
      mass += w;
    }
  }
  if (weights.empty()) throw NoLocalData("estimate: no sample within bandwidth of the query point");
  for (auto& w : weights) w /= mass;
  return weighted_minkowski_average(weights, sets);
}

std::pair<double, double> fig1_truth_raw(double u) {
  if (!(u >= -2.0 && u <= 2.0)) throw InvalidArgument("fig1_truth: u must lie in [-2, 2]");
  if (u <= -0.25) return {-2.0, -(2.0 * u + 1.0) / u + 2.0};
  if (u < 0.25) return {-2.0, 2.0};
  return {(4.0 * u - 1.0) / u - 2.0, 2.0};
}

ConvexSet fig1_truth(double u) {
  const auto [lo, hi] = fig1_truth_raw(u);
  return ConvexSet::interval(std::max(lo, -2.0), std::min(hi, 2.0));
}

SetRegressionDataset fig1_generate(int n, const RngSeed& seed) {
  if (n < 1) throw InvalidArgument("fig1_generate: n must be >= 1");
  auto engine = seed.engine();
  std::uniform_real_distribution<double> ux(-2.0, 2.0);
  std::uniform_real_distribution<double> uw(-1.0, 1.0);
  SetRegressionDataset data;
  data.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = ux(engine);
    const double w = uw(engine);
    const auto [lo, hi] = interval_bounds(fig1_truth(x));
    data.samples.push_back({Vec::Constant(1, x), ConvexSet::interval(lo + w, hi + w)});
  }
  return data;
}

std::vector<ConsistencyRow> consistency_curve(const std::vector<long>& n_values, int replicates,
                                              const std::vector<double>& u_grid, const RngSeed& seed,
                                              Kernel kernel) {
  if (replicates < 1) throw InvalidArgument("consistency_curve: replicates must be >= 1");
  if (u_grid.empty()) throw InvalidArgument("consistency_curve: empty u grid");
  std::vector<ConsistencyRow> rows;
  for (std::size_t k = 0; k < n_values.size(); ++k) {
    ConsistencyRow row;
    row.n = n_values[k];
    row.h = default_bandwidth(row.n, 1);
    row.errors.assign(static_cast<std::size_t>(replicates), {});
    row.replicate_medians.assign(static_cast<std::size_t>(replicates), 0.0);
    const RngSeed base = seed.child(k);
    parallel_for(row.errors.size(), [&](std::size_t r) {
      const auto data = fig1_generate(static_cast<int>(row.n), base.child(r));
      auto& errs = row.errors[r];
      for (double u : u_grid) {
        errs.push_back(hausdorff(estimate(data, kernel, Vec::Constant(1, u), row.h), fig1_truth(u)));
      }
      row.replicate_medians[r] = median_of(errs);
    });
    row.median_error = median_of(row.replicate_medians);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_dataset_jsonl(std::ostream& out, const SetRegressionDataset& data) {
  for (const auto& s : data.samples) {
    nlohmann::json j;
    j["x"] = vec_to_json(s.x);
    j["set"] = to_json(s.set);
    out << j.dump() << '\n';
  }
}

SetRegressionDataset read_dataset_jsonl(std::istream& in) {
  SetRegressionDataset data;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("x") || !j.contains("set")) {
        throw InvalidArgument("expected an object with 'x' and 'set'");
      }
      data.samples.push_back({vec_from_json(j.at("x"), "x"), set_from_json(j.at("set"))});
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("dataset line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("dataset line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  data.validate();
  return data;
}

}  // namespace setstat
