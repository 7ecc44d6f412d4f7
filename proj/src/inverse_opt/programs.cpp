#include <algorithm>
#include <cmath>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/inverse_opt.hpp"

namespace setstat {

std::optional<double> ParametricProgram::analytic_value(const Vec&, const Vec&) const { return std::nullopt; }

std::optional<ConvexSet> ParametricProgram::analytic_solution_set(const Vec&, double, const Vec&) const {
  return std::nullopt;
}

bool ParametricProgram::solution_interval(const Vec&, double, const Vec&, Interval&) const { return false; }

std::optional<double> ParametricProgram::symmetric_box_bound() const { return std::nullopt; }

std::optional<RdfValue> ParametricProgram::analytic_rdf(const Vec&, const Vec&, const Vec&, double) const {
  return std::nullopt;
}

// ---- box-linear ---------------------------------------------------------------------

BoxLinearProgram::BoxLinearProgram(int dim, double bound) : dim_(dim), bound_(bound) {
  if (dim < 1) throw InvalidArgument("BoxLinearProgram: dimension must be >= 1");
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidArgument("BoxLinearProgram: bound must be > 0");
}

double BoxLinearProgram::objective(const Vec& x, const Vec& u, const Vec& theta) const {
  return -(theta + u).dot(x);
}

Vec BoxLinearProgram::objective_gradient(const Vec&, const Vec& u, const Vec& theta) const { return -(theta + u); }

Vec BoxLinearProgram::constraints(const Vec& x, const Vec&, const Vec&) const {
  Vec g(2 * dim_);
  g.head(dim_) = x.array() - bound_;
  g.tail(dim_) = -x.array() - bound_;
  return g;
}

Mat BoxLinearProgram::constraint_jacobian(const Vec&, const Vec&, const Vec&) const {
  Mat j(2 * dim_, dim_);
  j.topRows(dim_) = Mat::Identity(dim_, dim_);
  j.bottomRows(dim_) = -Mat::Identity(dim_, dim_);
  return j;
}

ConvexSet BoxLinearProgram::feasible_box() const {
  return ConvexSet::box(Vec::Constant(dim_, -(bound_ + 1.0)), Vec::Constant(dim_, bound_ + 1.0));
}

std::optional<double> BoxLinearProgram::analytic_value(const Vec& u, const Vec& theta) const {
  return -bound_ * (theta + u).lpNorm<1>();
}

bool BoxLinearProgram::solution_interval(const Vec& u, double eps, const Vec& theta, Interval& out) const {
  if (dim_ != 1) return false;
  const double c = theta(0) + u(0);
  const double b = bound_;
  if (c > 0.0) {
    out = {std::max(-b, b - eps / c), b};
  } else if (c < 0.0) {
    out = {-b, std::min(b, -b - eps / c)};
  } else {
    out = {-b, b};
  }
  return true;
}

std::optional<ConvexSet> BoxLinearProgram::analytic_solution_set(const Vec& u, double eps, const Vec& theta) const {
  if (eps < 0.0) throw InvalidArgument("eps must be >= 0");
  Interval iv;
  if (solution_interval(u, eps, theta, iv)) return ConvexSet::interval(iv.lo, iv.hi);
  if (dim_ > 2) return std::nullopt;
  const ConvexSet box = ConvexSet::box(Vec::Constant(dim_, -bound_), Vec::Constant(dim_, bound_));
  const Vec c = theta + u;
  if (c.isZero(0.0)) return box;
  // -c^T x <= V + eps
  auto s = intersect_halfspace(box, -c, -bound_ * c.lpNorm<1>() + eps);
  if (!s) throw InternalConsistencyError("box-linear eps-argmin set came out empty");
  return s;
}

std::optional<RdfValue> BoxLinearProgram::analytic_rdf(const Vec& u, const Vec& theta, const Vec& lambda,
                                                       double mu) const {
  const double big = bound_ + 1.0;
  RdfValue out;
  out.x = Vec(dim_);
  out.grad_theta = Vec(dim_);
  out.value = 0.0;
  for (int j = 0; j < dim_; ++j) {
    const double l1 = lambda(j);
    const double l2 = lambda(dim_ + j);
    const double a = -(theta(j) + u(j)) + l1 - l2;
    double x = 0.0;
    if (mu > 0.0) x = std::clamp(-a / (2.0 * mu), -big, big);
    else if (a > 0.0) x = -big;
    else if (a < 0.0) x = big;
    out.x(j) = x;
    out.value += mu * x * x + a * x - bound_ * (l1 + l2);
    out.grad_theta(j) = -x;
  }
  out.grad_lambda = constraints(out.x, u, theta);
  return out;
}

// ---- box-quadratic ------------------------------------------------------------------

BoxQuadraticProgram::BoxQuadraticProgram(double bound) : bound_(bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) throw InvalidArgument("BoxQuadraticProgram: bound must be > 0");
}

double BoxQuadraticProgram::objective(const Vec& x, const Vec&, const Vec&) const { return x.squaredNorm(); }

Vec BoxQuadraticProgram::objective_gradient(const Vec& x, const Vec&, const Vec&) const { return 2.0 * x; }

Vec BoxQuadraticProgram::constraints(const Vec& x, const Vec&, const Vec&) const {
  return Vec{{x(0) - bound_, -x(0) - bound_}};
}

Mat BoxQuadraticProgram::constraint_jacobian(const Vec&, const Vec&, const Vec&) const {
  return Mat{{1.0}, {-1.0}};
}

ConvexSet BoxQuadraticProgram::feasible_box() const { return ConvexSet::interval(-(bound_ + 1.0), bound_ + 1.0); }

std::optional<double> BoxQuadraticProgram::analytic_value(const Vec&, const Vec&) const { return 0.0; }

bool BoxQuadraticProgram::solution_interval(const Vec&, double eps, const Vec&, Interval& out) const {
  const double r = std::min(bound_, std::sqrt(eps));
  out = {-r, r};
  return true;
}

std::optional<ConvexSet> BoxQuadraticProgram::analytic_solution_set(const Vec& u, double eps, const Vec& theta) const {
  if (eps < 0.0) throw InvalidArgument("eps must be >= 0");
  Interval iv;
  solution_interval(u, eps, theta, iv);
  return ConvexSet::interval(iv.lo, iv.hi);
}

std::optional<RdfValue> BoxQuadraticProgram::analytic_rdf(const Vec& u, const Vec& theta, const Vec& lambda,
                                                          double mu) const {
  const double big = bound_ + 1.0;
  const double a = lambda(0) - lambda(1);
  const double x = std::clamp(-a / (2.0 * (mu + 1.0)), -big, big);
  RdfValue out;
  out.x = Vec::Constant(1, x);
  out.value = (mu + 1.0) * x * x + a * x - bound_ * (lambda(0) + lambda(1));
  out.grad_theta = Vec(0);
  out.grad_lambda = constraints(out.x, u, theta);
  return out;
}

// ---- generic solvers ------------------------------------------------------------------

namespace {

void check_args(const ParametricProgram& prog, const Vec& u, const Vec& theta) {
  require_same_dim(u.size(), prog.u_dim(), "program input u");
  require_same_dim(theta.size(), prog.theta_dim(), "program parameter theta");
}

class GenericSolver {
 public:
  GenericSolver(const ParametricProgram& prog, const Vec& u, const Vec& theta, const SolverOptions& options)
      : prog_(prog), u_(u), theta_(theta), options_(options) {
    const ConvexSet box = prog.feasible_box();
    const auto* b = box.as<Box>();
    if (b == nullptr) throw InvalidArgument("feasible_box must be a Box");
    lower_ = b->lower;
    upper_ = b->upper;
  }

  // Alternating box clamp and Polyak steps on violated constraints.
  Vec restore_feasibility(Vec x) const {
    const double tol = 1e-10 * (1.0 + upper_.cwiseAbs().maxCoeff());
    for (int it = 0; it < 10000; ++it) {
      x = x.cwiseMax(lower_).cwiseMin(upper_);
      const Vec g = prog_.constraints(x, u_, theta_);
      if (g.size() == 0 || g.maxCoeff() <= tol) return x;
      const Mat jac = prog_.constraint_jacobian(x, u_, theta_);
      for (Eigen::Index j = 0; j < g.size(); ++j) {
        if (g(j) <= 0.0) continue;
        const double n2 = jac.row(j).squaredNorm();
        if (n2 == 0.0) throw InvalidArgument("infeasible program: violated constraint with zero gradient");
        x -= (g(j) / n2) * jac.row(j).transpose();
      }
    }
    throw SolverCapHit("could not reach a feasible point (infeasible program?)");
  }

  struct Minimum {
    double value;
    Vec x;
  };

  Minimum minimize() const {
    Vec x = restore_feasibility(0.5 * (lower_ + upper_));
    double fx = prog_.objective(x, u_, theta_);
    double step = 1.0;
    for (long it = 0; it < options_.max_iterations; ++it) {
      const Vec grad = prog_.objective_gradient(x, u_, theta_);
      double t = step;
      Vec y;
      double fy = 0.0;
      for (;;) {
        y = restore_feasibility(x - t * grad);
        fy = prog_.objective(y, u_, theta_);
        const Vec d = y - x;
        if (fy <= fx + grad.dot(d) + d.squaredNorm() / (2.0 * t) + 1e-15 * (1.0 + std::abs(fx)) || t < 1e-14) break;
        t *= 0.5;
      }
      const double move = (y - x).norm();
      x = std::move(y);
      fx = fy;
      if (move <= options_.tolerance * (1.0 + x.norm())) return {fx, x};
      step = std::min(2.0 * t, 1e3);
    }
    throw SolverCapHit("value_function: iteration cap reached");
  }

  // Point of S = {x feasible : f <= level} near z: feasibility restoration,
  // then bisection toward a known member of S.
  Vec project_level(const Vec& z, const Vec& inside, double level) const {
    Vec p = restore_feasibility(z);
    if (prog_.objective(p, u_, theta_) <= level) return p;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (prog_.objective(inside + mid * (p - inside), u_, theta_) <= level) lo = mid;
      else hi = mid;
    }
    return inside + lo * (p - inside);
  }

 private:
  const ParametricProgram& prog_;
  const Vec& u_;
  const Vec& theta_;
  SolverOptions options_;
  Vec lower_;
  Vec upper_;
};

}  // namespace

double value_function(const ParametricProgram& prog, const Vec& u, const Vec& theta, const SolverOptions& options) {
  check_args(prog, u, theta);
  if (auto v = prog.analytic_value(u, theta)) return *v;
  return GenericSolver(prog, u, theta, options).minimize().value;
}

std::optional<ConvexSet> eps_argmin_set(const ParametricProgram& prog, const Vec& u, double eps, const Vec& theta) {
  if (eps < 0.0) throw InvalidArgument("eps must be >= 0");
  check_args(prog, u, theta);
  return prog.analytic_solution_set(u, eps, theta);
}

bool in_eps_argmin(const ParametricProgram& prog, const Vec& x, const Vec& u, double eps, const Vec& theta,
                   double tol, const SolverOptions& options) {
  if (eps < 0.0) throw InvalidArgument("eps must be >= 0");
  require_same_dim(x.size(), prog.x_dim(), "in_eps_argmin");
  const double v = value_function(prog, u, theta, options);
  if (prog.objective(x, u, theta) > v + eps + tol) return false;
  const Vec g = prog.constraints(x, u, theta);
  return g.size() == 0 || g.maxCoeff() <= tol;
}

double sq_dist_to_inflated_set(const ParametricProgram& prog, const Vec& y, const Vec& u, double eps,
                               const Vec& theta, const ConvexSet& w, const SolverOptions& options) {
  if (eps < 0.0) throw InvalidArgument("eps must be >= 0");
  check_args(prog, u, theta);
  require_same_dim(y.size(), prog.x_dim(), "sq_dist_to_inflated_set");
  require_same_dim(w.dim(), prog.x_dim(), "sq_dist_to_inflated_set");
  Interval iv;
  if (prog.solution_interval(u, eps, theta, iv)) {
    const auto [wlo, whi] = interval_bounds(w);
    const double lo = iv.lo + wlo;
    const double hi = iv.hi + whi;
    const double d = y(0) < lo ? lo - y(0) : (y(0) > hi ? y(0) - hi : 0.0);
    return d * d;
  }
  if (auto s = prog.analytic_solution_set(u, eps, theta)) {
    return dist_point_squared(y, minkowski_sum(*s, w));
  }

  const GenericSolver solver(prog, u, theta, options);
  const auto best = solver.minimize();
  const double level = best.value + eps;
  if (const auto* ball = w.as<Ball>()) {
    // d(y, S (+) B(c, r)) = max(0, d(y - c, S) - r)
    const Vec target = y - ball->center;
    const Vec x = solver.project_level(target, best.x, level);
    const double d = std::max(0.0, (target - x).norm() - ball->radius);
    return d * d;
  }
  Vec x = best.x;
  Vec wp = nearest_point(y - x, w);
  for (long it = 0; it < options.max_iterations; ++it) {
    const Vec xn = solver.project_level(y - wp, best.x, level);
    wp = nearest_point(y - xn, w);
    const double move = (xn - x).norm();
    x = xn;
    if (move <= options.tolerance * (1.0 + x.norm())) return (y - x - wp).squaredNorm();
  }
  throw SolverCapHit("sq_dist_to_inflated_set: iteration cap reached");
}

}  // namespace setstat
