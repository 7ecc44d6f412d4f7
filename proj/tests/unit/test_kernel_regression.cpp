#include <doctest.h>

#include <cmath>
#include <sstream>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/kernel_regression.hpp"

using namespace setstat;

TEST_CASE("kernel profiles") {
  CHECK(kernel_profile(Kernel::epanechnikov, 0.0) == doctest::Approx(0.75));
  CHECK(kernel_profile(Kernel::epanechnikov, 0.5) == doctest::Approx(0.75 * 0.75));
  CHECK(kernel_profile(Kernel::epanechnikov, 1.2) == 0.0);
  CHECK(kernel_profile(Kernel::indicator, 0.99) > 0.0);
  CHECK(kernel_profile(Kernel::indicator, 1.01) == 0.0);
  CHECK_THROWS_AS(kernel_family_eval(Kernel::epanechnikov, 0.0, Vec::Zero(1)), InvalidArgument);
  CHECK(default_bandwidth(10000, 1) == doctest::Approx(std::pow(10000.0, -0.2)));
}

TEST_CASE("estimate is the kernel-weighted endpoint average") {
  SetRegressionDataset d;
  const double xs[] = {-0.3, 0.0, 0.2, 0.9};
  const double lo[] = {0.0, 1.0, -1.0, 5.0};
  const double hi[] = {1.0, 2.0, 0.0, 6.0};
  for (int i = 0; i < 4; ++i) d.samples.push_back({Vec::Constant(1, xs[i]), ConvexSet::interval(lo[i], hi[i])});
  const double h = 0.5;
  double wsum = 0, l = 0, r = 0;
  for (int i = 0; i < 4; ++i) {
    const double t = xs[i] / h;
    const double w = std::abs(t) <= 1 ? 0.75 * (1 - t * t) : 0.0;
    wsum += w;
    l += w * lo[i];
    r += w * hi[i];
  }
  const auto [elo, ehi] = interval_bounds(estimate(d, Kernel::epanechnikov, Vec::Zero(1), h));
  CHECK(elo == doctest::Approx(l / wsum));
  CHECK(ehi == doctest::Approx(r / wsum));
  CHECK_THROWS_AS(estimate(d, Kernel::epanechnikov, Vec::Constant(1, 5.0), h), NoLocalData);
}

TEST_CASE("figure-one truth") {
  auto at = [](double u) { return interval_bounds(fig1_truth(u)); };
  CHECK(at(0.0).first == doctest::Approx(-2.0));
  CHECK(at(0.0).second == doctest::Approx(2.0));
  // right branch: (4u - 1)/u - 2 at u = 1 gives 1
  CHECK(at(1.0).first == doctest::Approx(1.0));
  CHECK(at(1.0).second == doctest::Approx(2.0));
  // left branch: -(2u + 1)/u + 2 at u = -1 gives 1
  CHECK(at(-1.0).first == doctest::Approx(-2.0));
  CHECK(at(-1.0).second == doctest::Approx(1.0));
  for (double u = -2.0; u <= 2.0; u += 0.01) {
    const auto [a, b] = at(u);
    CHECK(a <= b);
    CHECK(a >= -2.0);
    CHECK(b <= 2.0);
  }
}

TEST_CASE("figure-one data: determinism and noise scale") {
  const auto a = fig1_generate(400, {3, 0});
  const auto b = fig1_generate(400, {3, 0});
  std::ostringstream sa, sb;
  write_dataset_jsonl(sa, a);
  write_dataset_jsonl(sb, b);
  CHECK(sa.str() == sb.str());
  for (const auto& s : a.samples) {
    const auto [lo, hi] = interval_bounds(s.set);
    const auto [tlo, thi] = interval_bounds(fig1_truth(s.x(0)));
    // a translate of the truth by w in [-1, 1]
    CHECK(std::abs((lo - tlo) - (hi - thi)) <= 1e-12);
    CHECK(std::abs(lo - tlo) <= 1.0);
  }
}

TEST_CASE("dataset jsonl round trip and errors") {
  const auto a = fig1_generate(20, {1, 0});
  std::stringstream s;
  write_dataset_jsonl(s, a);
  const auto back = read_dataset_jsonl(s);
  REQUIRE(back.samples.size() == 20);
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(back.samples[i].x(0) == a.samples[i].x(0));
    CHECK(hausdorff(back.samples[i].set, a.samples[i].set) == 0.0);
  }
  std::istringstream bad("{\"x\": [0.0], \"set\": {\"type\": \"box\"}}\n");
  CHECK_THROWS_AS(read_dataset_jsonl(bad), InvalidArgument);
}

TEST_CASE("consistency curve shrinks with n") {
  const std::vector<double> grid{-1.0, -0.5, 0.0, 0.5, 1.0};
  const auto rows = consistency_curve({100, 3000}, 4, grid, {11, 0});
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].median_error < rows[0].median_error);
  CHECK(rows[0].h == doctest::Approx(std::pow(100.0, -0.2)));
}
