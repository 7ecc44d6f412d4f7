#include <algorithm>
#include <cmath>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/parallel.hpp"
#include "setstat/random_sets.hpp"

namespace setstat {

namespace {

std::vector<Vec> law_directions(int dim, int count_2d) {
  if (dim == 1) return direction_grid(1, 2);
  return direction_grid(dim, dim == 2 ? count_2d : kSampledDirectionsHighDim);
}

// Per-direction support values of a sample, [direction][sample].
using SupportTable = std::vector<std::vector<double>>;

SupportTable support_table(const std::vector<ConvexSet>& sets, const std::vector<Vec>& dirs) {
  SupportTable t(dirs.size(), std::vector<double>(sets.size()));
  for (std::size_t k = 0; k < dirs.size(); ++k)
    for (std::size_t i = 0; i < sets.size(); ++i) t[k][i] = support(sets[i], dirs[k]);
  return t;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

// Polytope whose support matches the sample mean of supports at every grid direction.
ConvexSet support_mean_set(const std::vector<ConvexSet>& sets, const std::vector<Vec>& dirs) {
  const int d = sets.front().dim();
  const double w = 1.0 / static_cast<double>(sets.size());
  if (d == 1) {
    double lo = 0.0;
    double hi = 0.0;
    for (const auto& s : sets) {
      const auto [a, b] = interval_bounds(s);
      lo += w * a;
      hi += w * b;
    }
    return ConvexSet::interval(lo, std::max(lo, hi));
  }
  std::vector<Vec> pts;
  pts.reserve(dirs.size());
  for (const auto& u : dirs) {
    Vec p = Vec::Zero(d);
    for (const auto& s : sets) p += w * support_point(s, u);
    pts.push_back(std::move(p));
  }
  return ConvexSet::polytope(std::move(pts));
}

struct Slack {
  double value = -std::numeric_limits<double>::infinity();
  double se = 0.0;
};

// Updates the running maximum with the per-sample differences a_i - b_i.
void accumulate(Slack& s, const std::vector<double>& diff) {
  const double m = mean_of(diff);
  if (m > s.value) {
    s.value = m;
    s.se = standard_error(diff);
  }
}

LawReport equality_report(Law law, ConvexSet lhs, ConvexSet rhs, double tolerance) {
  const double value = hausdorff(lhs, rhs);
  return LawReport{law, true, std::move(lhs), std::move(rhs), value, 0.0, tolerance, value <= tolerance};
}

LawReport inclusion_report(Law law, ConvexSet lhs, ConvexSet rhs, const Slack& s, const LawOptions& options) {
  const double tol = options.inclusion_se * s.se + 1e-9;
  return LawReport{law, false, std::move(lhs), std::move(rhs), s.value, s.se, tol, s.value <= tol};
}


ConvexSet plain_average(const std::vector<ConvexSet>& sets) {
  const std::vector<double> w(sets.size(), 1.0 / static_cast<double>(sets.size()));
  return weighted_minkowski_average(w, sets);
}

}  // namespace

std::string_view law_name(Law law) {
  switch (law) {
    case Law::deterministic_hull: return "deterministic_hull";
    case Law::sum: return "sum";
    case Law::scalar_product: return "scalar_product";
    case Law::monotone: return "monotone";
    case Law::union_inclusion: return "union_inclusion";
    case Law::intersection_inclusion: return "intersection_inclusion";
    case Law::difference_inclusion: return "difference_inclusion";
  }
  return "unknown";
}

LawReport expectation_law_check(Law law, const LawSetup& setup, const LawOptions& options, const RngSeed& seed) {
  require_same_dim(setup.c.body.dim(), setup.d.body.dim(), "expectation_law_check");
  const int n = options.samples;
  if (n < 2) throw InvalidArgument("expectation_law_check: need at least two samples");
  const auto dirs = law_directions(setup.c.body.dim(), options.directions_2d);

  switch (law) {
    case Law::deterministic_hull: {
      const std::vector<ConvexSet> copies(static_cast<std::size_t>(n), setup.c.body);
      return equality_report(law, plain_average(copies), setup.c.body, options.equality_tolerance);
    }
    case Law::sum: {
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      const auto ds = sample_rats(setup.d, n, seed.child(1));
      std::vector<ConvexSet> sums;
      sums.reserve(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) sums.push_back(minkowski_sum(cs[i], ds[i]));
      auto rhs = minkowski_sum(selection_expectation_rats(setup.c), selection_expectation_rats(setup.d));
      return equality_report(law, plain_average(sums), std::move(rhs), options.equality_tolerance);
    }
    case Law::scalar_product: {
      const ScalarFactor& psi = setup.psi;
      if (!(psi.lo <= psi.hi) || !std::isfinite(psi.lo) || !std::isfinite(psi.hi)) {
        throw InvalidArgument("scalar_product: need finite lo <= hi");
      }
      const ConvexSet expected_c = selection_expectation_rats(setup.c);
      auto rhs = scale(psi.mean(), expected_c);
      if (psi.deterministic()) {
        // Psi C is again a translated set: Psi K (+) Psi xi.
        auto lhs = translate(scale(psi.lo, setup.c.body), psi.lo * setup.c.noise.mean());
        return equality_report(law, std::move(lhs), std::move(rhs), 1e-9);
      }
      if (psi.lo < 0.0 && psi.hi > 0.0) {
        throw LawNotComputable("scalar_product: a sign-changing random factor breaks E(Psi C) = E(Psi) E(C)");
      }
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      auto engine = seed.child(2).engine();
      std::uniform_real_distribution<double> unif(psi.lo, psi.hi);
      std::vector<ConvexSet> scaled;
      scaled.reserve(cs.size());
      for (const auto& c : cs) scaled.push_back(scale(unif(engine), c));
      return equality_report(law, plain_average(scaled), std::move(rhs), options.equality_tolerance);
    }
    case Law::monotone: {
      // D_i = co(C_i u D'_i) contains C_i on every draw.
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      const auto ds = sample_rats(setup.d, n, seed.child(1));
      std::vector<ConvexSet> big;
      big.reserve(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) big.push_back(convex_hull_union(cs[i], ds[i]));
      const auto tc = support_table(cs, dirs);
      const auto tb = support_table(big, dirs);
      Slack s;
      std::vector<double> diff(cs.size());
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        for (std::size_t i = 0; i < cs.size(); ++i) diff[i] = tc[k][i] - tb[k][i];
        accumulate(s, diff);
      }
      return inclusion_report(law, support_mean_set(cs, dirs), support_mean_set(big, dirs), s, options);
    }
    case Law::union_inclusion: {
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      const auto ds = sample_rats(setup.d, n, seed.child(1));
      std::vector<ConvexSet> unions;
      unions.reserve(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) unions.push_back(convex_hull_union(cs[i], ds[i]));
      const auto tc = support_table(cs, dirs);
      const auto td = support_table(ds, dirs);
      Slack s;
      std::vector<double> diff(cs.size());
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        const auto& side = mean_of(tc[k]) >= mean_of(td[k]) ? tc[k] : td[k];
        for (std::size_t i = 0; i < cs.size(); ++i) diff[i] = side[i] - std::max(tc[k][i], td[k][i]);
        accumulate(s, diff);
      }
      auto lhs = convex_hull_union(support_mean_set(cs, dirs), support_mean_set(ds, dirs));
      return inclusion_report(law, std::move(lhs), support_mean_set(unions, dirs), s, options);
    }
    case Law::intersection_inclusion: {
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      const auto ds = sample_rats(setup.d, n, seed.child(1));
      std::vector<ConvexSet> meets;
      meets.reserve(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto m = intersect(cs[i], ds[i]);
        if (!m) throw LawNotComputable("intersection_inclusion: C n D is empty on some draw");
        meets.push_back(std::move(*m));
      }
      const auto tm = support_table(meets, dirs);
      Slack s;
      std::vector<double> diff(cs.size());
      for (const auto* side : {&cs, &ds}) {
        const auto t = support_table(*side, dirs);
        for (std::size_t k = 0; k < dirs.size(); ++k) {
          for (std::size_t i = 0; i < cs.size(); ++i) diff[i] = tm[k][i] - t[k][i];
          accumulate(s, diff);
        }
      }
      auto rhs = intersect(support_mean_set(cs, dirs), support_mean_set(ds, dirs));
      if (!rhs) throw InternalConsistencyError("intersection_inclusion: E(C) n E(D) came out empty");
      return inclusion_report(law, support_mean_set(meets, dirs), std::move(*rhs), s, options);
    }
    case Law::difference_inclusion: {
      const auto cs = sample_rats(setup.c, n, seed.child(0));
      const auto ds = sample_rats(setup.d, n, seed.child(1));
      std::vector<ConvexSet> diffs;
      diffs.reserve(cs.size());
      for (std::size_t i = 0; i < cs.size(); ++i) {
        auto e = minkowski_diff(cs[i], ds[i]);
        if (!e) throw LawNotComputable("difference_inclusion: C (-) D is empty on some draw");
        diffs.push_back(std::move(*e));
      }
      const auto te = support_table(diffs, dirs);
      const auto tc = support_table(cs, dirs);
      const auto td = support_table(ds, dirs);
      Slack s;
      std::vector<double> diff(cs.size());
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        for (std::size_t i = 0; i < cs.size(); ++i) diff[i] = te[k][i] + td[k][i] - tc[k][i];
        accumulate(s, diff);
      }
      auto rhs = minkowski_diff(support_mean_set(cs, dirs), support_mean_set(ds, dirs));
      if (!rhs) throw InternalConsistencyError("difference_inclusion: E(C) (-) E(D) came out empty");
      return inclusion_report(law, support_mean_set(diffs, dirs), std::move(*rhs), s, options);
    }
  }
  throw InvalidArgument("expectation_law_check: unknown law");
}

// ---- Jensen ------------------------------------------------------------------

namespace {

double interval_max(const std::function<double(double)>& phi, double lo, double hi) {
  // phi is concave, so ternary search finds the maximiser on [lo, hi].
  double a = lo;
  double b = hi;
  for (int it = 0; it < 200 && b - a > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++it) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (phi(m1) < phi(m2)) a = m1;
    else b = m2;
  }
  return std::max({phi(lo), phi(hi), phi(0.5 * (a + b))});
}

}  // namespace

JensenReport jensen_check(const SetMap& map, const RaTSModel& model, int samples, const RngSeed& seed) {
  if (samples < 2) throw InvalidArgument("jensen_check: need at least two samples");
  const auto xs = sample_rats(model, samples, seed);
  const ConvexSet ex = selection_expectation_rats(model);

  if (const auto* cm = std::get_if<ConcaveIntervalMap>(&map)) {
    if (model.body.dim() != 1) throw InvalidArgument("jensen_check: interval map needs a 1-D model");
    std::vector<double> m(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto [lo, hi] = interval_bounds(xs[i]);
      m[i] = interval_max(cm->phi, lo, hi);
    }
    const auto [elo, ehi] = interval_bounds(ex);
    const double me = interval_max(cm->phi, elo, ehi);
    const double lhs = mean_of(m);
    return {lhs - me, standard_error(m), ConvexSet::interval(-lhs, lhs), ConvexSet::interval(-me, me)};
  }

  const auto& am = std::get<AffineSetMap>(map);
  require_same_dim(am.a.cols(), model.body.dim(), "jensen_check");
  require_same_dim(am.a.rows(), am.k0.dim(), "jensen_check");
  const auto dirs = law_directions(am.k0.dim(), 360);
  Slack s;
  std::vector<double> diff(xs.size());
  std::vector<Vec> lhs_pts;
  std::vector<Vec> rhs_pts;
  for (const auto& u : dirs) {
    const Vec v = am.a.transpose() * u;
    const double he = support(ex, v);
    Vec p = Vec::Zero(am.k0.dim());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      diff[i] = support(xs[i], v) - he;
      p += am.a * support_point(xs[i], v);
    }
    accumulate(s, diff);
    const Vec k0p = support_point(am.k0, u);
    lhs_pts.push_back(p / static_cast<double>(xs.size()) + k0p);
    rhs_pts.push_back(am.a * support_point(ex, v) + k0p);
  }
  return {s.value, s.se, ConvexSet::polytope(std::move(lhs_pts)), ConvexSet::polytope(std::move(rhs_pts))};
}

// ---- approximate Delta method ---------------------------------------------------

LipschitzSetMap LipschitzSetMap::identity(int dim) { return {Mat::Identity(dim, dim), std::nullopt}; }

LipschitzSetMap LipschitzSetMap::add(ConvexSet b0) {
  const int d = b0.dim();
  return {Mat::Identity(d, d), std::move(b0)};
}

LipschitzSetMap LipschitzSetMap::linear(Mat psi) { return {std::move(psi), std::nullopt}; }

ConvexSet LipschitzSetMap::apply(const ConvexSet& c) const {
  ConvexSet out = psi.isIdentity(0.0) ? c : scale(psi, c);
  if (addend) out = minkowski_sum(out, *addend);
  return out;
}

double LipschitzSetMap::kappa() const {
  Eigen::JacobiSVD<Mat> svd(psi);
  return svd.singularValues()(0);
}

DeltaReport delta_method_tailcheck(const LipschitzSetMap& g, const RaTSModel& model, int n, int replicates,
                                   const RngSeed& seed, double u) {
  if (n < 1 || replicates < 1) throw InvalidArgument("delta_method_tailcheck: n and replicates must be >= 1");
  const ConvexSet c = selection_expectation_rats(model);
  const ConvexSet gc = g.apply(c);
  const double root_n = std::sqrt(static_cast<double>(n));
  const double kappa = g.kappa();
  DeltaReport rep;
  rep.lhs_statistics.resize(static_cast<std::size_t>(replicates));
  rep.base_statistics.resize(static_cast<std::size_t>(replicates));
  parallel_for(rep.lhs_statistics.size(), [&](std::size_t r) {
    const ConvexSet cn = minkowski_mean(model, n, seed.child(r));
    rep.base_statistics[r] = root_n * hausdorff(cn, c);
    rep.lhs_statistics[r] = root_n * hausdorff(g.apply(cn), gc);
  });
  double lhs = 0.0;
  double rhs = 0.0;
  for (std::size_t r = 0; r < rep.lhs_statistics.size(); ++r) {
    if (rep.lhs_statistics[r] >= u) lhs += 1.0;
    if (kappa * rep.base_statistics[r] >= u) rhs += 1.0;
  }
  const double m = static_cast<double>(replicates);
  rep.lhs_tail = lhs / m;
  rep.rhs_tail = rhs / m;
  rep.standard_error =
      std::sqrt((rep.lhs_tail * (1.0 - rep.lhs_tail) + rep.rhs_tail * (1.0 - rep.rhs_tail)) / m);
  rep.passed = rep.lhs_tail <= rep.rhs_tail + 2.0 * rep.standard_error;
  return rep;
}

}  // namespace setstat
