#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/inverse_opt.hpp"
#include "setstat/parallel.hpp"

namespace setstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Grid {
  std::vector<double> eps;
  std::vector<std::vector<double>> axes;
  std::vector<Vec> thetas;
};

Grid make_grid(const ParametricProgram& prog, const PriorRegion& prior) {
  prior.validate(prog.theta_dim());
  Grid g{prior.eps_axis(), prior.theta_axes(), {}};
  const auto count = theta_count(g.axes);
  g.thetas.reserve(count);
  for (std::size_t j = 0; j < count; ++j) g.thetas.push_back(theta_at(g.axes, j));
  return g;
}

// Argmin over the grid in index order; strict comparison keeps the first
// (smallest eps, then lexicographically smallest theta) on ties.
void select_argmin(EstimationResult& r, const Grid& g) {
  const std::size_t t = g.thetas.size();
  std::size_t best = r.values.size();
  for (std::size_t k = 0; k < r.values.size(); ++k) {
    if (r.values[k] == kInf || std::isnan(r.values[k])) continue;
    if (best == r.values.size() || r.values[k] < r.values[best]) best = k;
  }
  if (best == r.values.size()) throw InvalidArgument(r.estimator + ": no finite objective value on the grid");
  r.eps_index = static_cast<long>(best / t);
  r.theta_index = static_cast<long>(best % t);
  r.eps_hat = g.eps.empty() ? 0.0 : g.eps[best / t];
  r.theta_hat = g.thetas[best % t];
  r.objective = r.values[best];
}

EstimationResult start_result(const char* tag, const Grid& g) {
  EstimationResult r;
  r.estimator = tag;
  r.eps_axis = g.eps;
  r.theta_axes = g.axes;
  return r;
}

// Uniform noise support [lo, hi] if the law is uniform in 1-D.
std::optional<Interval> uniform_support(const NoiseDistribution& noise) {
  if (noise.dim() != 1) return std::nullopt;
  if (const auto* b = std::get_if<UniformBoxNoise>(&noise.repr())) return Interval{b->lower(0), b->upper(0)};
  if (const auto* b = std::get_if<UniformBallNoise>(&noise.repr())) return Interval{-b->radius, b->radius};
  return std::nullopt;
}

// 4-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 4> kGlNodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
constexpr std::array<double, 4> kGlWeights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};
constexpr int kMlePanels = 64;

double integrate_density(const NoiseDistribution& noise, double y, double lo, double hi) {
  const double width = (hi - lo) / kMlePanels;
  double total = 0.0;
  for (int p = 0; p < kMlePanels; ++p) {
    const double mid = lo + (p + 0.5) * width;
    for (std::size_t k = 0; k < kGlNodes.size(); ++k) {
      total += kGlWeights[k] * noise.density_1d(y - (mid + 0.5 * width * kGlNodes[k]));
    }
  }
  return 0.5 * width * total;
}

const BoxLinearProgram& require_box_linear_1d(const ParametricProgram& prog, const char* where) {
  const auto* bl = dynamic_cast<const BoxLinearProgram*>(&prog);
  if (bl == nullptr || bl->x_dim() != 1) throw Unsupported(std::string(where) + ": needs the 1-D box-linear program");
  return *bl;
}

}  // namespace

// ---- data -------------------------------------------------------------------------------

void ObservationDataset::validate(const ParametricProgram& prog) const {
  if (samples.empty()) throw InvalidArgument("observation dataset is empty");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.u.size() != prog.u_dim() || s.y.size() != prog.x_dim()) {
      throw DimensionMismatch("observation " + std::to_string(i) + " does not match the program dimensions");
    }
    if (!s.u.allFinite() || !s.y.allFinite()) throw InvalidArgument("observation " + std::to_string(i) + " is not finite");
  }
}

ObservationDataset fig2_generate(int n, const RngSeed& seed) {
  if (n < 1) throw InvalidArgument("fig2_generate: n must be >= 1");
  const BoxLinearProgram prog(1, 2.0);
  auto engine = seed.engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ObservationDataset data;
  data.samples.reserve(static_cast<std::size_t>(n));
  const Vec theta = Vec::Zero(1);
  Interval iv;
  for (int i = 0; i < n; ++i) {
    Vec u(1);
    u(0) = -2.0 + 4.0 * unif(engine);
    prog.solution_interval(u, 1.0, theta, iv);
    const double x = iv.lo + (iv.hi - iv.lo) * unif(engine);
    const double w = -1.0 + 2.0 * unif(engine);
    Vec y(1);
    y(0) = x + w;
    data.samples.push_back({std::move(u), std::move(y)});
  }
  return data;
}

ObservationDataset box_quadratic_generate(int n, double r, const RngSeed& seed, double eps0) {
  if (n < 1) throw InvalidArgument("box_quadratic_generate: n must be >= 1");
  if (!(r >= 0.0) || !(eps0 >= 0.0)) throw InvalidArgument("box_quadratic_generate: r and eps0 must be >= 0");
  const double half = std::min(1.0, std::sqrt(eps0));
  auto engine = seed.engine();
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  ObservationDataset data;
  data.samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = half * unif(engine);
    const double w = r * unif(engine);
    Vec y(1);
    y(0) = x + w;
    data.samples.push_back({Vec::Zero(1), std::move(y)});
  }
  return data;
}

// ---- grid plumbing -----------------------------------------------------------------------

std::vector<double> grid_axis(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid step must be > 0");
  if (!(lo <= hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("grid bounds need lo <= hi");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> axis(count);
  for (std::size_t k = 0; k < count; ++k) axis[k] = lo + static_cast<double>(k) * step;
  return axis;
}

PriorRegion PriorRegion::fig2_default(int theta_dim, double step) {
  PriorRegion p;
  p.eps_lo = 0.1;
  p.eps_hi = 10.0;
  p.eps_step = step;
  p.theta_lo = Vec::Constant(theta_dim, -2.0);
  p.theta_hi = Vec::Constant(theta_dim, 2.0);
  p.theta_step = Vec::Constant(theta_dim, step);
  const int wd = std::max(theta_dim, 1);
  p.w = ConvexSet::box(Vec::Constant(wd, -1.0), Vec::Constant(wd, 1.0));
  return p;
}

std::vector<double> PriorRegion::eps_axis() const { return grid_axis(eps_lo, eps_hi, eps_step); }

std::vector<std::vector<double>> PriorRegion::theta_axes() const {
  std::vector<std::vector<double>> axes;
  for (Eigen::Index j = 0; j < theta_lo.size(); ++j) axes.push_back(grid_axis(theta_lo(j), theta_hi(j), theta_step(j)));
  return axes;
}

void PriorRegion::validate(int theta_dim) const {
  if (!(eps_lo >= 0.0)) throw InvalidArgument("prior: eps range must be nonnegative");
  if (theta_lo.size() != theta_dim || theta_hi.size() != theta_dim || theta_step.size() != theta_dim) {
    throw DimensionMismatch("prior: theta box does not match the program's theta dimension");
  }
  eps_axis();
  theta_axes();
}

std::size_t theta_count(const std::vector<std::vector<double>>& axes) {
  std::size_t c = 1;
  for (const auto& a : axes) c *= a.size();
  return c;
}

Vec theta_at(const std::vector<std::vector<double>>& axes, std::size_t j) {
  Vec t(static_cast<Eigen::Index>(axes.size()));
  for (std::size_t k = axes.size(); k-- > 0;) {
    t(static_cast<Eigen::Index>(k)) = axes[k][j % axes[k].size()];
    j /= axes[k].size();
  }
  return t;
}

// ---- ABP --------------------------------------------------------------------------------

double abp_objective(const ParametricProgram& prog, const ObservationDataset& data, double eps, const Vec& theta,
                     double lambda, const ConvexSet& w, const SolverOptions& options) {
  if (!(lambda >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  data.validate(prog);
  double total = 0.0;
  for (const auto& s : data.samples) total += sq_dist_to_inflated_set(prog, s.y, s.u, eps, theta, w, options);
  return total / static_cast<double>(data.size()) + lambda * eps;
}

EstimationResult abp_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior, std::optional<double> lambda, const SolverOptions& options) {
  data.validate(prog);
  const Grid g = make_grid(prog, prior);
  const double n = static_cast<double>(data.size());
  const double lam = lambda.value_or(1.0 / n);
  if (!(lam >= 0.0)) throw InvalidArgument("lambda must be >= 0");
  EstimationResult r = start_result("ABP", g);
  r.lambda = lam;
  const std::size_t t = g.thetas.size();
  r.values.assign(g.eps.size() * t, 0.0);

  Interval probe;
  const bool fast = prog.x_dim() == 1 && prior.w.dim() == 1 &&
                    prog.solution_interval(data.samples.front().u, g.eps.front(), g.thetas.front(), probe);
  const auto [wlo, whi] = prior.w.dim() == 1 ? interval_bounds(prior.w) : std::pair{0.0, 0.0};

  parallel_for(g.eps.size(), [&](std::size_t i) {
    const double eps = g.eps[i];
    for (std::size_t j = 0; j < t; ++j) {
      if (!fast) {
        r.values[i * t + j] = abp_objective(prog, data, eps, g.thetas[j], lam, prior.w, options);
        continue;
      }
      double total = 0.0;
      Interval iv;
      for (const auto& s : data.samples) {
        prog.solution_interval(s.u, eps, g.thetas[j], iv);
        const double lo = iv.lo + wlo;
        const double hi = iv.hi + whi;
        const double y = s.y(0);
        const double d = y < lo ? lo - y : (y > hi ? y - hi : 0.0);
        total += d * d;
      }
      r.values[i * t + j] = total / n + lam * eps;
    }
  });
  select_argmin(r, g);
  return r;
}

// ---- baselines ----------------------------------------------------------------------

EstimationResult via_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior) {
  data.validate(prog);
  const auto b = prog.symmetric_box_bound();
  if (!b) throw Unsupported("via_estimate: needs a symmetric box feasible set");
  Grid g = make_grid(prog, prior);
  g.eps.clear();
  EstimationResult r = start_result("VIA", g);
  r.values.assign(g.thetas.size(), 0.0);
  parallel_for(g.thetas.size(), [&](std::size_t j) {
    double total = 0.0;
    for (const auto& s : data.samples) {
      const Vec grad = prog.objective_gradient(s.y, s.u, g.thetas[j]);
      total += std::max(0.0, grad.dot(s.y) + *b * grad.lpNorm<1>());
    }
    r.values[j] = total / static_cast<double>(data.size());
  });
  select_argmin(r, g);
  r.eps_hat = r.objective;
  return r;
}

EstimationResult kkt_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior) {
  data.validate(prog);
  const auto b = prog.symmetric_box_bound();
  if (!b || prog.x_dim() != 1) throw Unsupported("kkt_estimate: needs a 1-D program on a symmetric box");
  Grid g = make_grid(prog, prior);
  g.eps.clear();
  EstimationResult r = start_result("KKT", g);
  r.values.assign(g.thetas.size(), 0.0);
  std::vector<double> eps_at(g.thetas.size(), 0.0);
  const double n = static_cast<double>(data.size());
  parallel_for(g.thetas.size(), [&](std::size_t j) {
    std::array<double, 5> terms{};
    double residual = 0.0;
    for (const auto& s : data.samples) {
      const double y = s.y(0);
      const double a = prog.objective_gradient(s.y, s.u, g.thetas[j])(0);
      const double g1 = y - *b;
      const double g2 = -y - *b;
      // min |a + l1 - l2| + l1 |g1| + l2 |g2| over l >= 0: cancel a with one
      // multiplier when that is cheaper than leaving the stationarity residual.
      double l1 = 0.0;
      double l2 = 0.0;
      if (a > 0.0 && std::abs(g2) < 1.0) l2 = a;
      if (a < 0.0 && std::abs(g1) < 1.0) l1 = -a;
      const double stat = std::abs(a + l1 - l2);
      terms[0] += std::max(g1, 0.0);
      terms[1] += std::max(g2, 0.0);
      terms[2] += stat;
      terms[3] += std::abs(l1 * g1);
      terms[4] += std::abs(l2 * g2);
      residual += stat + l1 * std::abs(g1) + l2 * std::abs(g2);
    }
    r.values[j] = residual / n;
    eps_at[j] = *std::max_element(terms.begin(), terms.end()) / n;
  });
  select_argmin(r, g);
  r.eps_hat = eps_at[static_cast<std::size_t>(r.theta_index)];
  return r;
}

// ---- MLE --------------------------------------------------------------------------------

double mle_objective(const ParametricProgram& prog, const ObservationDataset& data, double eps, const Vec& theta,
                     const NoiseDistribution& noise) {
  data.validate(prog);
  if (prog.x_dim() != 1 || noise.dim() != 1) throw Unsupported("mle_objective: needs a 1-D program and noise");
  const auto uniform = uniform_support(noise);
  double total = 0.0;
  Interval iv;
  for (const auto& s : data.samples) {
    if (!prog.solution_interval(s.u, eps, theta, iv)) throw Unsupported("mle_objective: no closed-form interval");
    const double len = iv.hi - iv.lo;
    if (!(len > 0.0)) throw InvalidArgument("mle_objective: solution interval is empty or a point");
    const double y = s.y(0);
    double like = 0.0;
    if (uniform) {
      // y - x in [wlo, whi]  <=>  x in [y - whi, y - wlo]
      const double overlap = std::min(iv.hi, y - uniform->lo) - std::max(iv.lo, y - uniform->hi);
      like = std::max(0.0, overlap) / (uniform->hi - uniform->lo);
    } else {
      like = integrate_density(noise, y, iv.lo, iv.hi);
    }
    if (!(like > 0.0)) return kInf;
    total += -std::log(like) + std::log(len);
  }
  return total / static_cast<double>(data.size());
}

EstimationResult mle_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior, const NoiseDistribution& noise) {
  data.validate(prog);
  const Grid g = make_grid(prog, prior);
  EstimationResult r = start_result("MLE", g);
  const std::size_t t = g.thetas.size();
  r.values.assign(g.eps.size() * t, 0.0);
  parallel_for(g.eps.size(), [&](std::size_t i) {
    for (std::size_t j = 0; j < t; ++j) r.values[i * t + j] = mle_objective(prog, data, g.eps[i], g.thetas[j], noise);
  });
  select_argmin(r, g);
  return r;
}

// ---- RDF --------------------------------------------------------------------------------

RdfValue rdf_eval(const ParametricProgram& prog, const Vec& u, const Vec& theta, const Vec& lambda, double mu) {
  require_same_dim(u.size(), prog.u_dim(), "rdf_eval u");
  require_same_dim(theta.size(), prog.theta_dim(), "rdf_eval theta");
  require_same_dim(lambda.size(), prog.constraint_count(), "rdf_eval lambda");
  if ((lambda.array() < 0.0).any()) throw InvalidArgument("rdf_eval: lambda must be >= 0");
  if (!(mu >= 0.0)) throw InvalidArgument("rdf_eval: mu must be >= 0");
  if (auto v = prog.analytic_rdf(u, theta, lambda, mu)) return *v;
  throw Unsupported("rdf_eval: only built-in programs");
}

// ---- pre-smoothing ----------------------------------------------------------------------

EstimationResult presmooth_estimate(const ParametricProgram& prog, const ObservationDataset& data, double h,
                                    const PriorRegion& prior, const RngSeed& seed, std::optional<double> lambda) {
  const auto& bl = require_box_linear_1d(prog, "presmooth_estimate");
  data.validate(prog);
  if (!(h >= 0.0)) throw InvalidArgument("presmooth_estimate: h must be >= 0");
  if (prior.w.dim() != 1) throw DimensionMismatch("presmooth_estimate: W must be 1-D");
  const auto [wlo, whi] = interval_bounds(prior.w);
  const std::size_t n = data.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return data.samples[a].u(0) < data.samples[b].u(0); });

  // Sliding window over u-sorted samples; x_hat drawn in original index order.
  std::vector<std::optional<Interval>> smooth(n);
  std::size_t left = 0;
  std::size_t right = 0;
  for (const std::size_t i : order) {
    const double ui = data.samples[i].u(0);
    while (data.samples[order[left]].u(0) < ui - h) ++left;
    while (right < n && data.samples[order[right]].u(0) <= ui + h) ++right;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t k = left; k < right; ++k) {
      lo = std::min(lo, data.samples[order[k]].y(0));
      hi = std::max(hi, data.samples[order[k]].y(0));
    }
    // co{y} (-) W
    const double elo = lo - wlo;
    const double ehi = hi - whi;
    if (elo <= ehi) smooth[i] = Interval{elo, ehi};
  }

  auto engine = seed.engine();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> xhat;
  std::vector<double> us;
  EstimationResult r;
  for (std::size_t i = 0; i < n; ++i) {
    if (!smooth[i]) {
      ++r.skipped;
      continue;
    }
    xhat.push_back(smooth[i]->lo + (smooth[i]->hi - smooth[i]->lo) * unif(engine));
    us.push_back(data.samples[i].u(0));
  }
  if (xhat.empty()) throw NoLocalData("presmooth_estimate: every sample was skipped");

  const Grid g = make_grid(prog, prior);
  const double lam = lambda.value_or(1.0 / static_cast<double>(n));
  const long skipped = r.skipped;
  r = start_result("PRESMOOTH", g);
  r.skipped = skipped;
  r.lambda = lam;
  const std::size_t t = g.thetas.size();
  r.values.assign(g.eps.size() * t, 0.0);
  const double b = bl.bound();
  const double m = static_cast<double>(xhat.size());
  parallel_for(g.eps.size(), [&](std::size_t i) {
    const double eps = g.eps[i];
    for (std::size_t j = 0; j < t; ++j) {
      double total = 0.0;
      for (std::size_t k = 0; k < xhat.size(); ++k) {
        // {x : f <= V + eps} without the box: a half-line (or the whole line).
        const double c = g.thetas[j](0) + us[k];
        double d = 0.0;
        if (c > 0.0) d = std::max(0.0, (b - eps / c) - xhat[k]);
        else if (c < 0.0) d = std::max(0.0, xhat[k] - (-b - eps / c));
        total += d * d;
      }
      r.values[i * t + j] = total / m + lam * eps;
    }
  });
  select_argmin(r, g);
  return r;
}

// ---- noise support heuristic ----------------------------------------------------------------

double noise_support_scale(long n, Tail tail) {
  if (n < 2) throw InvalidArgument("noise_support_heuristic: n must be >= 2");
  const double ln = std::log(static_cast<double>(n));
  const double s = std::sqrt(2.0 * ln);
  return tail == Tail::subgaussian ? s : s + ln;
}

ConvexSet noise_support_heuristic(const Mat& sigma, long n, Tail tail) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) throw InvalidArgument("noise_support_heuristic: Sigma must be square");
  if (!sigma.allFinite() || (sigma.diagonal().array() < 0.0).any()) {
    throw InvalidArgument("noise_support_heuristic: Sigma must be finite with a nonnegative diagonal");
  }
  const Vec half = noise_support_scale(n, tail) * sigma.diagonal().cwiseSqrt();
  return ConvexSet::box(-half, half);
}

}  // namespace setstat
