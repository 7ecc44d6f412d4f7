#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/parallel.hpp"
#include "setstat/random_sets.hpp"

using namespace setstat;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Mat mc_covariance(const NoiseDistribution& noise, int n, std::uint64_t seed) {
  auto eng = RngSeed{seed, 0}.engine();
  Vec mean = Vec::Zero(noise.dim());
  std::vector<Vec> xs;
  for (int i = 0; i < n; ++i) {
    xs.push_back(noise.sample(eng));
    mean += xs.back();
  }
  mean /= n;
  Mat c = Mat::Zero(noise.dim(), noise.dim());
  for (const auto& x : xs) c += (x - mean) * (x - mean).transpose();
  return c / (n - 1);
}

double relative(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("noise covariances agree with Monte Carlo") {
  const int n = 200000;
  CHECK(relative(mc_covariance(NoiseDistribution::uniform_box(v2(-1, 0), v2(1, 3)), n, 1),
                 NoiseDistribution::uniform_box(v2(-1, 0), v2(1, 3)).covariance()) < 0.02);
  CHECK(relative(mc_covariance(NoiseDistribution::uniform_ball(2, 1.5), n, 2),
                 NoiseDistribution::uniform_ball(2, 1.5).covariance()) < 0.02);
  CHECK(relative(mc_covariance(NoiseDistribution::triangular(2.0), n, 3),
                 NoiseDistribution::triangular(2.0).covariance()) < 0.02);
  Mat s(2, 2);
  s << 1.0, 0.3, 0.3, 0.5;
  const auto tg = NoiseDistribution::truncated_gaussian(s, 1.5);
  CHECK(relative(mc_covariance(tg, n, 4), tg.covariance()) < 0.02);
}

TEST_CASE("closed-form moments") {
  const auto box = NoiseDistribution::uniform_interval(-1.0, 1.0);
  CHECK(box.covariance()(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(NoiseDistribution::triangular(3.0).covariance()(0, 0) == doctest::Approx(1.5));
  CHECK(NoiseDistribution::uniform_ball(3, 2.0).covariance()(1, 1) == doctest::Approx(4.0 / 5.0));
  const auto shifted = NoiseDistribution::uniform_interval(1.0, 3.0);
  CHECK(shifted.mean()(0) == doctest::Approx(2.0));
  CHECK(shifted.second_moment()(0, 0) == doctest::Approx(1.0 / 3.0 + 4.0));
}

TEST_CASE("one-dimensional densities integrate to one") {
  for (const auto& noise : {NoiseDistribution::triangular(1.5), NoiseDistribution::uniform_interval(-0.5, 2.0),
                            NoiseDistribution::truncated_gaussian(Mat::Constant(1, 1, 0.7), 1.2)}) {
    const int m = 200000;
    double s = 0.0;
    const double lo = -4.0, hi = 4.0, h = (hi - lo) / m;
    for (int i = 0; i < m; ++i) s += noise.density_1d(lo + (i + 0.5) * h) * h;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("noise constructors validate") {
  CHECK_THROWS_AS(NoiseDistribution::uniform_interval(1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(NoiseDistribution::uniform_ball(2, -1.0), InvalidArgument);
  Mat bad(2, 2);
  bad << 1, 2, 2, 1;
  CHECK_THROWS_AS(NoiseDistribution::truncated_gaussian(bad, 1.0), InvalidArgument);
}

TEST_CASE("seeds: determinism and independent children") {
  const RngSeed s{42, 0};
  auto a = s.engine();
  auto b = s.engine();
  CHECK(a() == b());
  CHECK_FALSE(s.child(0) == s.child(1));
  CHECK_FALSE(s.child(0).child(1) == s.child(1).child(0));
  CHECK(s.child(3).engine()() != s.child(4).engine()());
}

TEST_CASE("parallel_for visits every index and rethrows the lowest failure") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  bool all = true;
  for (auto& h : hits) all = all && h.load() == 1;
  CHECK(all);
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "17");
  }
}

TEST_CASE("rats expectation and Minkowski mean") {
  const RaTSModel m{ConvexSet::box(v2(-1, -1), v2(1, 1)), NoiseDistribution::uniform_box(v2(0, 0), v2(1, 2))};
  const auto e = selection_expectation_rats(m);
  CHECK(hausdorff(e, ConvexSet::box(v2(-0.5, 0), v2(1.5, 2))) <= 1e-12);
  const auto a = minkowski_mean(m, 500, {9, 0});
  const auto b = minkowski_mean(m, 500, {9, 0});
  CHECK(hausdorff(a, b) == 0.0);
  CHECK(hausdorff(a, e) < 0.1);
  // oracle: the mean of a translated body is the body moved by the mean noise draw
  const auto draws = sample_noise(m.noise, 500, {9, 0});
  Vec mean = Vec::Zero(2);
  for (const auto& d : draws) mean += d;
  mean /= 500.0;
  CHECK(hausdorff(a, translate(m.body, mean)) <= 1e-12);
}

TEST_CASE("sample covariance by hand") {
  const std::vector<Vec> xs{v2(1, 0), v2(-1, 0), v2(0, 2), v2(0, -2)};
  const Mat c = sample_covariance(xs);
  CHECK(c(0, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(c(1, 1) == doctest::Approx(8.0 / 3.0));
  CHECK(c(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("slln errors shrink and the weil statistic is the shift norm") {
  const RaTSModel m{ConvexSet::box(v2(-1, -1), v2(1, 1)), NoiseDistribution::uniform_box(v2(-1, -1), v2(1, 1))};
  const auto rows = slln_curve(m, {50, 5000}, 10, {1, 0});
  CHECK(rows[1].mean_error < rows[0].mean_error);
  const auto z = clt_rats_replicates(m, 200, 20, {2, 0});
  const auto w = weil_statistic_replicates(m, 200, 20, {2, 0});
  for (std::size_t r = 0; r < z.size(); ++r) CHECK(std::abs(w[r] - z[r].norm()) <= 1e-10);
}

TEST_CASE("expectation laws on a simple configuration") {
  LawSetup s{{ConvexSet::polytope({v2(0, 0), v2(1, 0), v2(0, 1)}),
              NoiseDistribution::uniform_box(v2(-0.2, -0.2), v2(0.2, 0.2))},
             // (0.25, 0.25) lies in every draw of both sets, and C stays wide enough to erode by D
             {ConvexSet::box(v2(0.15, 0.15), v2(0.35, 0.35)),
              NoiseDistribution::uniform_box(v2(-0.05, 0), v2(0.05, 0.05))},
             {0.5, 1.5}};
  LawOptions opt;
  opt.samples = 2000;
  for (Law law : kAllLaws) {
    const auto r = expectation_law_check(law, s, opt, {5, 0});
    INFO(law_name(law));
    CHECK(r.passed);
  }
  s.psi = {2.0, 2.0};
  const auto exact = expectation_law_check(Law::scalar_product, s, opt, {5, 0});
  CHECK(exact.value <= 1e-9);
  s.psi = {-1.0, 1.0};
  CHECK_THROWS_AS(expectation_law_check(Law::scalar_product, s, opt, {5, 0}), LawNotComputable);
}

TEST_CASE("jensen: affine maps have zero slack, concave maps stay ordered") {
  const RaTSModel m{ConvexSet::interval(-0.5, 0.5), NoiseDistribution::uniform_interval(-1.0, 1.0)};
  Mat a = Mat::Constant(1, 1, 2.0);
  const auto affine = jensen_check(AffineSetMap{a, ConvexSet::interval(0, 1)}, m, 4000, {6, 0});
  // equality holds in expectation; the gap is Monte Carlo noise
  CHECK(std::abs(affine.slack) <= 3.0 * affine.standard_error + 1e-9);
  const auto concave =
      jensen_check(ConcaveIntervalMap{[](double x) { return 2.0 - x * x; }}, m, 4000, {6, 0});
  CHECK(concave.slack <= 2.0 * concave.standard_error + 1e-9);
}

TEST_CASE("delta method tail check for a scaled identity") {
  const RaTSModel m{ConvexSet::box(v2(-1, -1), v2(1, 1)), NoiseDistribution::uniform_box(v2(-1, -1), v2(1, 1))};
  const auto g = LipschitzSetMap::linear(Mat::Identity(2, 2) * 0.5);
  CHECK(g.kappa() == doctest::Approx(0.5));
  const auto r = delta_method_tailcheck(g, m, 200, 400, {7, 0}, 0.2);
  CHECK(r.passed);
  for (std::size_t i = 0; i < r.lhs_statistics.size(); ++i) {
    CHECK(r.lhs_statistics[i] <= 0.5 * r.base_statistics[i] + 1e-9);
  }
}
