#pragma once

#include <iosfwd>
#include <utility>
#include <vector>

#include "setstat/convex_set.hpp"
#include "setstat/rng.hpp"

namespace setstat {

enum class Kernel {
  /// (1/2) 1(|t| < 1)
  indicator,
  /// (3/4)(1 - t^2) on |t| <= 1
  epanechnikov,
};

/// phi(t).
double kernel_profile(Kernel k, double t);

/// phi_h(v) = h^{-d} phi(|v| / h). Throws InvalidArgument for h <= 0.
double kernel_family_eval(Kernel k, double h, const Vec& v);

/// n^{-1/(d+4)}.
double default_bandwidth(long n, int d);

struct LabeledSetSample {
  Vec x;
  ConvexSet set;
};

struct SetRegressionDataset {
  std::vector<LabeledSetSample> samples;

  int input_dim() const;
  int set_dim() const;
  /// Throws InvalidArgument on an empty dataset or inconsistent dimensions.
  void validate() const;
};

/// Kernel regression estimate at u: the observed sets Minkowski-averaged
/// with weights phi_h(x_i - u), normalised by the total kernel mass.
/// Throws NoLocalData when every weight is zero.
ConvexSet estimate(const SetRegressionDataset& data, Kernel kernel, const Vec& u, double h);

/// Piecewise interval truth of the 1-D example on [-2, 2], clipped to [-2, 2].
ConvexSet fig1_truth(double u);

/// Same branches without clipping (the left branch exceeds 2 on (-1/2, -1/4)).
std::pair<double, double> fig1_truth_raw(double u);

/// x ~ U(-2, 2), w ~ U(-1, 1), s = truth(x) (+) {w} as vertex intervals.
SetRegressionDataset fig1_generate(int n, const RngSeed& seed);

struct ConsistencyRow {
  long n = 0;
  double h = 0.0;
  /// Median over replicates of the per-replicate median error over the u grid.
  double median_error = 0.0;
  std::vector<double> replicate_medians;
  /// errors[r][j]: Hausdorff error of replicate r at u_grid[j].
  std::vector<std::vector<double>> errors;
};

/// Fig-1 consistency study with the default bandwidth. Replicate r at
/// n_values[k] uses seed.child(k).child(r).
std::vector<ConsistencyRow> consistency_curve(const std::vector<long>& n_values, int replicates,
                                              const std::vector<double>& u_grid, const RngSeed& seed,
                                              Kernel kernel = Kernel::epanechnikov);

/// One {"x": [...], "set": {...}} object per line.
void write_dataset_jsonl(std::ostream& out, const SetRegressionDataset& data);
SetRegressionDataset read_dataset_jsonl(std::istream& in);

}  // namespace setstat
