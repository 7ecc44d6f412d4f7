#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/inverse_opt.hpp"
#include "setstat/inverse_opt_io.hpp"

using namespace setstat;

namespace {

Vec s1(double a) { return Vec::Constant(1, a); }

// Forwards to a program but hides every closed-form hook, so the generic
// solver path runs.
class Opaque : public ParametricProgram {
 public:
  explicit Opaque(const ParametricProgram& p) : p_(p) {}
  std::string name() const override { return "opaque"; }
  int x_dim() const override { return p_.x_dim(); }
  int u_dim() const override { return p_.u_dim(); }
  int theta_dim() const override { return p_.theta_dim(); }
  int constraint_count() const override { return p_.constraint_count(); }
  double objective(const Vec& x, const Vec& u, const Vec& t) const override { return p_.objective(x, u, t); }
  Vec objective_gradient(const Vec& x, const Vec& u, const Vec& t) const override {
    return p_.objective_gradient(x, u, t);
  }
  Vec constraints(const Vec& x, const Vec& u, const Vec& t) const override { return p_.constraints(x, u, t); }
  Mat constraint_jacobian(const Vec& x, const Vec& u, const Vec& t) const override {
    return p_.constraint_jacobian(x, u, t);
  }
  ConvexSet feasible_box() const override { return p_.feasible_box(); }

 private:
  const ParametricProgram& p_;
};

// Grid oracle for V and the eps-argmin interval of a 1-D program on [-b, b].
std::pair<double, double> grid_interval(const ParametricProgram& p, const Vec& u, double eps, const Vec& th, double b,
                                        double* value) {
  const int m = 200000;
  double v = INFINITY;
  for (int k = 0; k <= m; ++k) v = std::min(v, p.objective(s1(-b + 2 * b * k / m), u, th));
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k <= m; ++k) {
    const double x = -b + 2 * b * k / m;
    if (p.objective(s1(x), u, th) <= v + eps) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  *value = v;
  return {lo, hi};
}

}  // namespace

TEST_CASE("box-linear value function and solution interval match a grid") {
  const BoxLinearProgram p(1, 2.0);
  for (double c : {-1.3, -0.2, 0.0, 0.4, 2.5}) {
    for (double eps : {0.1, 1.0, 5.0}) {
      double v = 0;
      const auto [lo, hi] = grid_interval(p, s1(c), eps, s1(0.0), 2.0, &v);
      CHECK(value_function(p, s1(c), s1(0.0)) == doctest::Approx(v).epsilon(1e-9));
      Interval iv;
      REQUIRE(p.solution_interval(s1(c), eps, s1(0.0), iv));
      CHECK(std::abs(iv.lo - lo) <= 1e-4);
      CHECK(std::abs(iv.hi - hi) <= 1e-4);
    }
  }
}

TEST_CASE("box-quadratic solution interval") {
  const BoxQuadraticProgram p(1.0);
  Interval iv;
  REQUIRE(p.solution_interval(s1(0), 0.25, Vec(0), iv));
  CHECK(iv.lo == doctest::Approx(-0.5));
  CHECK(iv.hi == doctest::Approx(0.5));
  REQUIRE(p.solution_interval(s1(0), 4.0, Vec(0), iv));
  CHECK(iv.hi == doctest::Approx(1.0));
}

TEST_CASE("generic solver agrees with the closed forms") {
  const BoxLinearProgram p(1, 2.0);
  const Opaque o(p);
  const auto w = ConvexSet::interval(-1.0, 1.0);
  std::mt19937_64 eng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 30; ++k) {
    const Vec uu = s1(u(eng)), th = s1(0.5 * u(eng)), y = s1(2.0 * u(eng));
    const double eps = 0.2 + std::abs(u(eng));
    CHECK(value_function(o, uu, th) == doctest::Approx(value_function(p, uu, th)).epsilon(1e-6));
    const double fast = sq_dist_to_inflated_set(p, y, uu, eps, th, w);
    const double slow = sq_dist_to_inflated_set(o, y, uu, eps, th, w);
    CHECK(std::abs(fast - slow) <= 1e-5);
  }
}

TEST_CASE("two-dimensional box-linear solution set") {
  const BoxLinearProgram p(2, 1.0);
  Vec u(2), th(2);
  u << 1.0, -0.5;
  th << 0.0, 0.0;
  const auto s = eps_argmin_set(p, u, 0.5, th);
  REQUIRE(s.has_value());
  // optimum at (1, -1); the eps-level set is the box cut by x1 - 0.5 x2 >= 1.5 - 0.5
  Vec corner(2);
  corner << 1.0, -1.0;
  CHECK(contains(*s, corner, 1e-9));
  Vec inside(2);
  inside << 0.6, -1.0;
  CHECK(contains(*s, inside, 1e-9));
  Vec outside(2);
  outside << 0.4, -1.0;
  CHECK_FALSE(contains(*s, outside, 1e-9));
}

TEST_CASE("abp objective by hand") {
  const BoxLinearProgram p(1, 2.0);
  ObservationDataset d;
  d.samples.push_back({s1(1.0), s1(-2.5)});  // S = [1, 2], S + W = [0, 3]; distance 2.5
  d.samples.push_back({s1(-1.0), s1(0.0)});  // S = [-2, -1], S + W = [-3, 0]; inside
  const double obj = abp_objective(p, d, 1.0, s1(0.0), 0.1, ConvexSet::interval(-1, 1));
  CHECK(obj == doctest::Approx((2.5 * 2.5 + 0.0) / 2 + 0.1));
}

TEST_CASE("abp grid search: fast path equals the generic objective") {
  const BoxLinearProgram p(1, 2.0);
  const auto data = fig2_generate(60, {4, 0});
  PriorRegion prior = PriorRegion::fig2_default(1, 0.5);
  const auto r = abp_estimate(p, data, prior);
  CHECK(r.eps_axis.size() == 20);
  CHECK(r.theta_axes.at(0).size() == 9);
  CHECK(r.lambda == doctest::Approx(1.0 / 60));
  const std::size_t t = 9;
  for (std::size_t i = 0; i < r.eps_axis.size(); i += 5) {
    for (std::size_t j = 0; j < t; j += 3) {
      const double direct = abp_objective(p, data, r.eps_axis[i], theta_at(r.theta_axes, j), r.lambda, prior.w);
      CHECK(r.values[i * t + j] == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  double best = INFINITY;
  for (double v : r.values) best = std::min(best, v);
  CHECK(r.objective == best);
}

TEST_CASE("theta grid enumeration is lexicographic") {
  const std::vector<std::vector<double>> axes{{0, 1}, {10, 20, 30}};
  CHECK(theta_count(axes) == 6);
  CHECK(theta_at(axes, 0)(1) == 10);
  CHECK(theta_at(axes, 1)(1) == 20);
  CHECK(theta_at(axes, 3)(0) == 1);
  CHECK(theta_at(axes, 3)(1) == 10);
  CHECK(grid_axis(0.1, 10.0, 0.05).size() == 199);
  CHECK(grid_axis(-2.0, 2.0, 0.05).size() == 81);
}

TEST_CASE("via and kkt by hand on the box-quadratic program") {
  const BoxQuadraticProgram p(1.0);
  ObservationDataset d;
  for (double y : {0.5, -1.5, 2.0}) d.samples.push_back({s1(0), s1(y)});
  PriorRegion prior = PriorRegion::fig2_default(0, 0.05);
  // VIA: max(0, 2y*y + |2y|) -> 0.5+1, 4.5+3, 8+4
  const auto via = via_estimate(p, d, prior);
  CHECK(via.eps_hat == doctest::Approx((1.5 + 7.5 + 12.0) / 3));
  // KKT terms: g1 = y - 1, g2 = -y - 1; a = 2y
  //  y = 0.5:  a = 1, g2 = -1.5 (|g2| >= 1 so l2 = 0): stationarity 1
  //  y = -1.5: a = -3, g1 = -2.5 -> l1 = 0: stationarity 3, g2 = 0.5
  //  y = 2:    a = 4, g2 = -3 -> l2 = 0: stationarity 4, g1 = 1
  const auto kkt = kkt_estimate(p, d, prior);
  const double t1 = (0 + 0 + 1.0) / 3, t2 = (0 + 0.5 + 0) / 3, t3 = (1 + 3 + 4) / 3.0;
  CHECK(kkt.eps_hat == doctest::Approx(std::max({t1, t2, t3})));
}

TEST_CASE("mle objective: uniform closed form matches quadrature") {
  const BoxLinearProgram p(1, 2.0);
  const auto data = fig2_generate(50, {8, 0});
  const auto noise = NoiseDistribution::uniform_interval(-1.0, 1.0);
  for (double eps : {0.5, 1.0, 3.0}) {
    double oracle = 0.0;
    bool zero = false;
    for (const auto& s : data.samples) {
      Interval iv;
      p.solution_interval(s.u, eps, s1(0.1), iv);
      const int m = 20000;
      double like = 0.0;
      for (int k = 0; k < m; ++k) {
        const double x = iv.lo + (k + 0.5) * (iv.hi - iv.lo) / m;
        like += (std::abs(s.y(0) - x) <= 1.0 ? 0.5 : 0.0) * (iv.hi - iv.lo) / m;
      }
      if (like <= 0) zero = true;
      oracle += -std::log(like) + std::log(iv.hi - iv.lo);
    }
    const double got = mle_objective(p, data, eps, s1(0.1), noise);
    if (zero) CHECK(std::isinf(got));
    else CHECK(got == doctest::Approx(oracle / 50).epsilon(1e-3));
  }
}

TEST_CASE("mle with smooth noise and the all-infinite error") {
  const BoxLinearProgram p(1, 2.0);
  ObservationDataset d;
  d.samples.push_back({s1(1.0), s1(50.0)});
  auto prior = PriorRegion::fig2_default(1, 0.5);
  CHECK_THROWS_AS(mle_estimate(p, d, prior, NoiseDistribution::uniform_interval(-1, 1)), InvalidArgument);
  const auto tri = NoiseDistribution::triangular(1.0);
  ObservationDataset d2;
  d2.samples.push_back({s1(1.0), s1(1.5)});
  CHECK(std::isfinite(mle_objective(p, d2, 1.0, s1(0.0), tri)));
}

TEST_CASE("rdf gradients match finite differences") {
  const BoxLinearProgram p(1, 2.0);
  const double h = 1e-6;
  Vec lam(2);
  lam << 0.3, 0.7;
  const auto v = rdf_eval(p, s1(0.4), s1(-0.1), lam, 0.8);
  const double dth = (rdf_eval(p, s1(0.4), s1(-0.1 + h), lam, 0.8).value -
                      rdf_eval(p, s1(0.4), s1(-0.1 - h), lam, 0.8).value) / (2 * h);
  CHECK(v.grad_theta(0) == doctest::Approx(dth).epsilon(1e-6));
  Vec lp = lam, lm = lam;
  lp(1) += h;
  lm(1) -= h;
  const double dl = (rdf_eval(p, s1(0.4), s1(-0.1), lp, 0.8).value - rdf_eval(p, s1(0.4), s1(-0.1), lm, 0.8).value) /
                    (2 * h);
  CHECK(v.grad_lambda(1) == doctest::Approx(dl).epsilon(1e-6));
  CHECK_THROWS_AS(rdf_eval(p, s1(0), s1(0), -lam, 1.0), InvalidArgument);
  CHECK_THROWS_AS(rdf_eval(Opaque(p), s1(0), s1(0), lam, 1.0), Unsupported);
}

TEST_CASE("presmoothing runs and reports skips") {
  const BoxLinearProgram p(1, 2.0);
  const auto data = fig2_generate(300, {12, 0});
  const auto r = presmooth_estimate(p, data, 0.3, PriorRegion::fig2_default(1, 0.1), {13, 0});
  CHECK(r.estimator == "PRESMOOTH");
  CHECK(r.eps_hat >= 0.1);
  CHECK(r.skipped >= 0);
  CHECK_THROWS_AS(presmooth_estimate(BoxQuadraticProgram(), box_quadratic_generate(10, 1.0, {1, 0}),
                                     0.3, PriorRegion::fig2_default(0, 0.1), {1, 0}),
                  Unsupported);
}

TEST_CASE("noise support heuristic") {
  const auto box = noise_support_heuristic(Mat::Identity(2, 2) * 4.0, 100, Tail::subgaussian);
  const double s = std::sqrt(2 * std::log(100.0));
  CHECK(support(box, Vec::Unit(2, 0)) == doctest::Approx(2.0 * s));
  CHECK(noise_support_scale(100, Tail::subexponential) == doctest::Approx(s + std::log(100.0)));
  CHECK_THROWS_AS(noise_support_scale(1, Tail::subgaussian), InvalidArgument);
}

TEST_CASE("observation io and result json") {
  const auto data = fig2_generate(5, {2, 0});
  std::stringstream s;
  write_observations_jsonl(s, data);
  const auto back = read_observations_jsonl(s);
  REQUIRE(back.size() == 5);
  CHECK(back.samples[3].y(0) == data.samples[3].y(0));
  std::istringstream bad("{\"u\": [1.0]}\n");
  CHECK_THROWS_AS(read_observations_jsonl(bad), InvalidArgument);

  ObservationDataset d;
  d.samples.push_back({s1(1.0), s1(50.0)});
  d.samples.push_back({s1(1.0), s1(1.5)});
  const auto r = mle_estimate(BoxLinearProgram(), fig2_generate(30, {3, 0}), PriorRegion::fig2_default(1, 0.5),
                              NoiseDistribution::uniform_interval(-1, 1));
  const auto j = to_json(r);
  CHECK(j["grid"]["values"].size() == r.eps_axis.size());
  CHECK(j["grid"]["theta_axis"].size() == 9);
}
