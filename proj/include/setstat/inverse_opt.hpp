#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "setstat/convex_set.hpp"
#include "setstat/noise.hpp"
#include "setstat/rng.hpp"

namespace setstat {

/// Closed interval [lo, hi] (lo <= hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Value and gradients of the regularised dual function.
struct RdfValue {
  double value = 0.0;
  Vec grad_theta;
  Vec grad_lambda;
  /// Inner minimiser.
  Vec x;
};

/// min_x { f(x, u, theta) : g(x, u, theta) <= 0 }, with f and g convex in x.
/// The feasible box X0 must contain every feasible set in its interior.
class ParametricProgram {
 public:
  virtual ~ParametricProgram() = default;

  virtual std::string name() const = 0;
  virtual int x_dim() const = 0;
  virtual int u_dim() const = 0;
  virtual int theta_dim() const = 0;
  virtual int constraint_count() const = 0;

  virtual double objective(const Vec& x, const Vec& u, const Vec& theta) const = 0;
  virtual Vec objective_gradient(const Vec& x, const Vec& u, const Vec& theta) const = 0;
  virtual Vec constraints(const Vec& x, const Vec& u, const Vec& theta) const = 0;
  /// constraint_count() x x_dim().
  virtual Mat constraint_jacobian(const Vec& x, const Vec& u, const Vec& theta) const = 0;
  virtual ConvexSet feasible_box() const = 0;

  // Closed forms. The defaults report "not available" and the generic
  // solvers take over.
  virtual std::optional<double> analytic_value(const Vec& u, const Vec& theta) const;
  virtual std::optional<ConvexSet> analytic_solution_set(const Vec& u, double eps, const Vec& theta) const;
  /// 1-D solution set without allocation; false if unavailable.
  virtual bool solution_interval(const Vec& u, double eps, const Vec& theta, Interval& out) const;
  /// b when the feasible set is the box [-b, b]^p independent of (u, theta).
  virtual std::optional<double> symmetric_box_bound() const;
  virtual std::optional<RdfValue> analytic_rdf(const Vec& u, const Vec& theta, const Vec& lambda, double mu) const;
};

/// f = -(theta + u)^T x, g = [x - b; -x - b], X0 = [-(b+1), b+1]^p.
class BoxLinearProgram : public ParametricProgram {
 public:
  explicit BoxLinearProgram(int dim = 1, double bound = 2.0);

  std::string name() const override { return "box_linear"; }
  int x_dim() const override { return dim_; }
  int u_dim() const override { return dim_; }
  int theta_dim() const override { return dim_; }
  int constraint_count() const override { return 2 * dim_; }
  double bound() const { return bound_; }

  double objective(const Vec& x, const Vec& u, const Vec& theta) const override;
  Vec objective_gradient(const Vec& x, const Vec& u, const Vec& theta) const override;
  Vec constraints(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat constraint_jacobian(const Vec& x, const Vec& u, const Vec& theta) const override;
  ConvexSet feasible_box() const override;

  std::optional<double> analytic_value(const Vec& u, const Vec& theta) const override;
  std::optional<ConvexSet> analytic_solution_set(const Vec& u, double eps, const Vec& theta) const override;
  bool solution_interval(const Vec& u, double eps, const Vec& theta, Interval& out) const override;
  std::optional<double> symmetric_box_bound() const override { return bound_; }
  std::optional<RdfValue> analytic_rdf(const Vec& u, const Vec& theta, const Vec& lambda, double mu) const override;

 private:
  int dim_;
  double bound_;
};

/// f = x^2, g = [x - b; -x - b], X0 = [-(b+1), b+1]. No theta; u is ignored.
class BoxQuadraticProgram : public ParametricProgram {
 public:
  explicit BoxQuadraticProgram(double bound = 1.0);

  std::string name() const override { return "box_quadratic"; }
  int x_dim() const override { return 1; }
  int u_dim() const override { return 1; }
  int theta_dim() const override { return 0; }
  int constraint_count() const override { return 2; }
  double bound() const { return bound_; }

  double objective(const Vec& x, const Vec& u, const Vec& theta) const override;
  Vec objective_gradient(const Vec& x, const Vec& u, const Vec& theta) const override;
  Vec constraints(const Vec& x, const Vec& u, const Vec& theta) const override;
  Mat constraint_jacobian(const Vec& x, const Vec& u, const Vec& theta) const override;
  ConvexSet feasible_box() const override;

  std::optional<double> analytic_value(const Vec& u, const Vec& theta) const override;
  std::optional<ConvexSet> analytic_solution_set(const Vec& u, double eps, const Vec& theta) const override;
  bool solution_interval(const Vec& u, double eps, const Vec& theta, Interval& out) const override;
  std::optional<double> symmetric_box_bound() const override { return bound_; }
  std::optional<RdfValue> analytic_rdf(const Vec& u, const Vec& theta, const Vec& lambda, double mu) const override;

 private:
  double bound_;
};

// ---- program-level operations ---------------------------------------------------

struct SolverOptions {
  double tolerance = 1e-8;
  long max_iterations = 100000;
};

/// V(u, theta). Closed form when available; otherwise projected gradient
/// with Armijo backtracking over X0 n {g <= 0}. Throws SolverCapHit.
double value_function(const ParametricProgram& prog, const Vec& u, const Vec& theta,
                      const SolverOptions& options = {});

/// The eps-argmin set as a ConvexSet when a closed form exists.
std::optional<ConvexSet> eps_argmin_set(const ParametricProgram& prog, const Vec& u, double eps,
                                        const Vec& theta);

/// f(x) <= V + eps + tol and g(x) <= tol.
bool in_eps_argmin(const ParametricProgram& prog, const Vec& x, const Vec& u, double eps, const Vec& theta,
                   double tol = 1e-9, const SolverOptions& options = {});

/// d^2(y, S(u, eps, theta) (+) W). Exact for closed-form solution sets;
/// otherwise alternating projections (an upper bound, tight in 1-D).
double sq_dist_to_inflated_set(const ParametricProgram& prog, const Vec& y, const Vec& u, double eps,
                               const Vec& theta, const ConvexSet& w, const SolverOptions& options = {});

// ---- data -----------------------------------------------------------------------

struct Observation {
  Vec u;
  Vec y;
};

struct ObservationDataset {
  std::vector<Observation> samples;

  std::size_t size() const noexcept { return samples.size(); }
  /// Throws InvalidArgument when empty or dimensions disagree with prog.
  void validate(const ParametricProgram& prog) const;
};

/// u ~ U(-2, 2), x ~ U(S(u, 1, 0)) for the 1-D box-linear program, w ~ U(-1, 1), y = x + w.
ObservationDataset fig2_generate(int n, const RngSeed& seed);

/// Box-quadratic data: x ~ U(-sqrt(eps0), sqrt(eps0)) clipped to the box, w ~ U(-r, r), u = 0.
ObservationDataset box_quadratic_generate(int n, double r, const RngSeed& seed, double eps0 = 1.0);

// ---- estimators -----------------------------------------------------------------

/// Grid eps_lo : eps_step : eps_hi times the theta box with per-axis steps.
struct PriorRegion {
  double eps_lo = 0.1;
  double eps_hi = 10.0;
  double eps_step = 0.05;
  Vec theta_lo;
  Vec theta_hi;
  Vec theta_step;
  ConvexSet w = ConvexSet::interval(-1.0, 1.0);

  /// E = [0.1, 10], Theta = [-2, 2]^p, W = [-1, 1]^p, steps 0.05.
  static PriorRegion fig2_default(int theta_dim = 1, double step = 0.05);

  std::vector<double> eps_axis() const;
  std::vector<std::vector<double>> theta_axes() const;
  void validate(int theta_dim) const;
};

/// Points lo, lo + step, ... up to hi (inclusive within 1e-9 steps).
std::vector<double> grid_axis(double lo, double hi, double step);

struct EstimationResult {
  std::string estimator;
  double eps_hat = 0.0;
  Vec theta_hat;
  double objective = 0.0;
  double lambda = 0.0;
  std::vector<double> eps_axis;
  std::vector<std::vector<double>> theta_axes;
  /// values[i * theta_count + j], theta combinations in lexicographic order
  /// (first axis slowest). +inf marks a zero-likelihood sentinel.
  std::vector<double> values;
  long skipped = 0;
  /// Grid indices of the argmin.
  long eps_index = -1;
  long theta_index = -1;
};

/// Lexicographic theta combination number j.
Vec theta_at(const std::vector<std::vector<double>>& axes, std::size_t j);
std::size_t theta_count(const std::vector<std::vector<double>>& axes);

double abp_objective(const ParametricProgram& prog, const ObservationDataset& data, double eps, const Vec& theta,
                     double lambda, const ConvexSet& w, const SolverOptions& options = {});

/// Full grid enumeration; ties go to the smallest eps, then the
/// lexicographically smallest theta. lambda defaults to 1/n.
EstimationResult abp_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior, std::optional<double> lambda = std::nullopt,
                              const SolverOptions& options = {});

/// Per-sample eps_i = max(0, max_{x feasible} grad f(y_i)^T (y_i - x)),
/// averaged; theta (if any) profiled over the prior grid. Needs a symmetric box.
EstimationResult via_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior);

/// KKT residual estimator for 1-D programs on a symmetric box; per-sample
/// multipliers in closed form; theta (if any) profiled over the prior grid.
EstimationResult kkt_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior);

/// Negative mean log-likelihood plus mean log-volume for a 1-D program.
/// Returns +inf when some sample has zero likelihood.
double mle_objective(const ParametricProgram& prog, const ObservationDataset& data, double eps, const Vec& theta,
                     const NoiseDistribution& noise);

/// Grid argmin of mle_objective; +inf cells are skipped, all +inf throws.
EstimationResult mle_estimate(const ParametricProgram& prog, const ObservationDataset& data,
                              const PriorRegion& prior, const NoiseDistribution& noise);

/// h_mu(u, theta, lambda) = min_{x in X0} mu |x|^2 + f + lambda^T g and its gradients.
RdfValue rdf_eval(const ParametricProgram& prog, const Vec& u, const Vec& theta, const Vec& lambda, double mu);

/// Kernel pre-smoothing: S_hat(u_i) = co{y_j : |u_j - u_i| <= h} (-) W, x_hat_i ~ U(S_hat(u_i)),
/// then a grid fit of the relaxed program without the g constraints.
/// Empty neighbourhoods or erosions are skipped and counted; all skipped throws.
EstimationResult presmooth_estimate(const ParametricProgram& prog, const ObservationDataset& data, double h,
                                    const PriorRegion& prior, const RngSeed& seed,
                                    std::optional<double> lambda = std::nullopt);

enum class Tail { subgaussian, subexponential };

/// Box with half-widths scale * sqrt(Sigma_jj), scale = sqrt(2 log n)
/// (+ log n for sub-exponential tails). n >= 2.
ConvexSet noise_support_heuristic(const Mat& sigma, long n, Tail tail);
double noise_support_scale(long n, Tail tail);

}  // namespace setstat
