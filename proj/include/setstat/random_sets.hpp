#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "setstat/convex_set.hpp"
#include "setstat/noise.hpp"
#include "setstat/rng.hpp"

namespace setstat {

/// Randomly translated set K (+) xi.
struct RaTSModel {
  ConvexSet body;
  NoiseDistribution noise;
};

/// n independent translates, drawn sequentially from seed.engine().
std::vector<ConvexSet> sample_rats(const RaTSModel& model, int n, const RngSeed& seed);

/// Noise vectors behind sample_rats (same stream, same order).
std::vector<Vec> sample_noise(const NoiseDistribution& noise, int n, const RngSeed& seed);

/// K (+) {E xi}.
ConvexSet selection_expectation_rats(const RaTSModel& model);

/// Minkowski average (1/n) (+)_i X_i of n fresh draws.
ConvexSet minkowski_mean(const RaTSModel& model, int n, const RngSeed& seed);

struct SllnRow {
  long n = 0;
  double mean_error = 0.0;
  double median_error = 0.0;
  std::vector<double> errors;
};

/// Hausdorff error of the Minkowski average against E(X), per n and
/// replicate. Replicate r at n_values[k] uses seed.child(k).child(r).
std::vector<SllnRow> slln_curve(const RaTSModel& model, const std::vector<long>& n_values, int replicates,
                                const RngSeed& seed);

/// Least-squares slope of log(mean_error) against log(n).
double loglog_slope(const std::vector<SllnRow>& rows);

/// sqrt(n) * v where {v} = average (-) E(X). Requires zero-mean noise.
/// Replicate r uses seed.child(r).
std::vector<Vec> clt_rats_replicates(const RaTSModel& model, int n, int replicates, const RngSeed& seed);

/// sqrt(n) * hausdorff(average, E(X)); same streams as clt_rats_replicates.
std::vector<double> weil_statistic_replicates(const RaTSModel& model, int n, int replicates, const RngSeed& seed);

/// Sample covariance (divisor m - 1) of a list of vectors.
Mat sample_covariance(const std::vector<Vec>& xs);

// ---- expectation algebra ----------------------------------------------------

enum class Law {
  deterministic_hull,
  sum,
  scalar_product,
  monotone,
  union_inclusion,
  intersection_inclusion,
  difference_inclusion,
};

inline constexpr Law kAllLaws[] = {Law::deterministic_hull,     Law::sum,
                                   Law::scalar_product,         Law::monotone,
                                   Law::union_inclusion,        Law::intersection_inclusion,
                                   Law::difference_inclusion};

std::string_view law_name(Law law);

/// Scalar factor Psi ~ U(lo, hi), deterministic when lo == hi.
struct ScalarFactor {
  double lo = 1.0;
  double hi = 1.0;
  bool deterministic() const noexcept { return lo == hi; }
  double mean() const noexcept { return 0.5 * (lo + hi); }
};

/// Two independent RaTS families C, D and a factor Psi independent of both.
struct LawSetup {
  RaTSModel c;
  RaTSModel d;
  ScalarFactor psi;
};

struct LawOptions {
  int samples = 10000;
  double equality_tolerance = 0.05;
  /// Inclusion checks allow this many standard errors of slack.
  double inclusion_se = 2.0;
  int directions_2d = 360;
};

struct LawReport {
  Law law = Law::sum;
  bool equality = true;
  ConvexSet lhs;
  ConvexSet rhs;
  /// Hausdorff distance (equality laws) or max support slack (inclusion laws).
  double value = 0.0;
  double standard_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Equality laws compare a Monte-Carlo Minkowski average with the exact
/// RaTS expectation. Inclusion laws compare support functions of both sides
/// on the same sample. Throws LawNotComputable when the setup does not
/// satisfy the law's hypotheses (empty intersections or differences, a
/// sign-changing random factor).
LawReport expectation_law_check(Law law, const LawSetup& setup, const LawOptions& options, const RngSeed& seed);

// ---- Jensen ------------------------------------------------------------------

/// S(u) = A u (+) K0, extended to sets as S(X) = A X (+) K0.
struct AffineSetMap {
  Mat a;
  ConvexSet k0;
};

/// 1-D S(u) = [-phi(u), phi(u)] with phi concave and positive; on an
/// interval X, S(X) = [-max_X phi, max_X phi].
struct ConcaveIntervalMap {
  std::function<double(double)> phi;
};

using SetMap = std::variant<AffineSetMap, ConcaveIntervalMap>;

struct JensenReport {
  /// max_u h(u, E S(X)) - h(u, S(E X)); <= 0 when the inclusion holds.
  double slack = 0.0;
  double standard_error = 0.0;
  ConvexSet lhs;  // E S(X), Monte Carlo
  ConvexSet rhs;  // S(E X), exact
};

/// The map must be graph-convex; that is the caller's responsibility.
JensenReport jensen_check(const SetMap& map, const RaTSModel& model, int samples, const RngSeed& seed);

// ---- approximate Delta method ---------------------------------------------------

/// G(C) = Psi C (+) addend, Lipschitz with constant ||Psi||_2.
struct LipschitzSetMap {
  Mat psi;
  std::optional<ConvexSet> addend;

  static LipschitzSetMap identity(int dim);
  static LipschitzSetMap add(ConvexSet b0);
  static LipschitzSetMap linear(Mat psi);

  ConvexSet apply(const ConvexSet& c) const;
  double kappa() const;
};

struct DeltaReport {
  double lhs_tail = 0.0;
  double rhs_tail = 0.0;
  double standard_error = 0.0;
  bool passed = false;
  /// sqrt(n) D(G(C_n), G(C)) per replicate.
  std::vector<double> lhs_statistics;
  /// sqrt(n) D(C_n, C) per replicate.
  std::vector<double> base_statistics;
};

/// Empirical P(sqrt(n) D(G(C_n), G(C)) >= u) against P(kappa w >= u) with
/// w = sqrt(n) D(C_n, C). Passes when lhs <= rhs + 2 standard errors.
DeltaReport delta_method_tailcheck(const LipschitzSetMap& g, const RaTSModel& model, int n, int replicates,
                                   const RngSeed& seed, double u);

}  // namespace setstat
