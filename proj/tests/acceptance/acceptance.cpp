// One PASS/FAIL line per acceptance criterion. Tolerances are the constants
// next to each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "setstat/geometry.hpp"
#include "setstat/harness.hpp"
#include "setstat/inverse_opt.hpp"
#include "setstat/kernel_regression.hpp"
#include "setstat/random_sets.hpp"

using namespace setstat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::vector<Vec> to_vec(const std::vector<oracle::P2>& v) {
  std::vector<Vec> out;
  for (const auto& p : v) out.push_back(Vec(p));
  return out;
}

std::vector<oracle::P2> to_p2(const std::vector<Vec>& v) {
  std::vector<oracle::P2> out;
  for (const auto& p : v) out.emplace_back(p(0), p(1));
  return out;
}

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

// ---- 1 -----------------------------------------------------------------------------------

Outcome geometry_oracles() {
  constexpr double kSumTol = 1e-9;
  constexpr double kDistTol = 1e-6;
  constexpr double kCancelTol = 1e-9;
  constexpr double kSeconds = 30.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 eng(20240601);
  std::uniform_int_distribution<int> nv(3, 12);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  std::uniform_real_distribution<double> rad(0.2, 2.0);
  double sum_err = 0, dist_err = 0, cancel_err = 0;
  for (int t = 0; t < 200; ++t) {
    const auto pa = oracle::random_polygon_points(eng, nv(eng), rad(eng), {c(eng), c(eng)});
    const auto pb = oracle::random_polygon_points(eng, nv(eng), rad(eng), {c(eng), c(eng)});
    const auto a = ConvexSet::polytope(to_vec(pa));
    const auto b = ConvexSet::polytope(to_vec(pb));
    const auto sum = minkowski_sum(a, b);
    const auto brute = oracle::brute_minkowski(pa, pb);
    sum_err = std::max(sum_err, oracle::polygon_hausdorff(to_p2(vertex_list(sum)), brute));
    const auto ha = oracle::jarvis_hull(pa);
    for (int k = 0; k < 5; ++k) {
      const oracle::P2 x(c(eng) * 2, c(eng) * 2);
      dist_err = std::max(dist_err, std::abs(dist_point(Vec(x), a) - oracle::polygon_distance_grid(x, ha)));
    }
    const auto back = minkowski_diff(sum, b);
    cancel_err = std::max(cancel_err, back ? oracle::polygon_hausdorff(to_p2(vertex_list(*back)), ha) : INFINITY);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Outcome o;
  o.pass = sum_err <= kSumTol && dist_err <= kDistTol && cancel_err <= kCancelTol && secs < kSeconds;
  o.detail = "sum " + fmt("%.2e", sum_err) + " (<= 1e-9), distance " + fmt("%.2e", dist_err) +
             " (<= 1e-6), cancellation " + fmt("%.2e", cancel_err) + " (<= 1e-9), " + fmt("%.1f", secs) + " s (< 30)";
  return o;
}

// ---- 2 -----------------------------------------------------------------------------------

Outcome slln() {
  constexpr double kLo = -0.65, kHi = -0.35, kSeconds = 120.0;
  const auto t0 = std::chrono::steady_clock::now();
  const RaTSModel m{ConvexSet::box(v2(-1, -1), v2(1, 1)), NoiseDistribution::uniform_box(v2(-1, -1), v2(1, 1))};
  const auto rows = slln_curve(m, {100, 1000, 10000}, 50, {2, 0});
  const double slope = loglog_slope(rows);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::string detail = "slope " + fmt("%.4f", slope) + " in [-0.65, -0.35]; mean errors";
  for (const auto& r : rows) detail += " " + fmt("%.4g", r.mean_error);
  return {slope >= kLo && slope <= kHi && secs < kSeconds, detail + ", " + fmt("%.1f", secs) + " s (< 120)"};
}

// ---- 3 -----------------------------------------------------------------------------------

Outcome clt() {
  constexpr double kRelFrob = 0.10, kWeil = 1e-10, kSeconds = 120.0;
  const auto t0 = std::chrono::steady_clock::now();
  const RaTSModel m{ConvexSet::box(v2(-1, -1), v2(1, 1)), NoiseDistribution::uniform_box(v2(-1, -0.5), v2(1, 0.5))};
  const auto z = clt_rats_replicates(m, 1000, 10000, {3, 0});
  const auto w = weil_statistic_replicates(m, 1000, 10000, {3, 0});
  // oracle: the analytic second moment of centred uniform box noise, diag(w^2 / 12)
  Mat ana = Mat::Zero(2, 2);
  ana(0, 0) = 4.0 / 12.0;
  ana(1, 1) = 1.0 / 12.0;
  const double rel = (sample_covariance(z) - ana).norm() / ana.norm();
  double gap = 0.0;
  for (std::size_t r = 0; r < z.size(); ++r) gap = std::max(gap, std::abs(w[r] - z[r].norm()));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {rel <= kRelFrob && gap <= kWeil && secs < kSeconds,
          "relative Frobenius " + fmt("%.4f", rel) + " (<= 0.10), max |Weil - norm| " + fmt("%.2e", gap) +
              " (<= 1e-10), " + fmt("%.1f", secs) + " s (< 120)"};
}

// ---- 4 -----------------------------------------------------------------------------------

LawSetup random_law_setup(std::mt19937_64& eng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto polygon = [&](int k, double radius) {
    std::vector<double> ang;
    for (int i = 0; i < k; ++i) ang.push_back(2 * std::numbers::pi * (i + 0.6 * u(eng)) / k);
    std::vector<Vec> pts;
    for (double a : ang) {
      const double r = radius * (0.8 + 0.4 * u(eng));
      pts.push_back(v2(r * std::cos(a), r * std::sin(a)));
    }
    return ConvexSet::polytope(std::move(pts));
  };
  auto box_noise = [&]() {
    const double a = 0.1 + 0.05 * u(eng);
    const double b = 0.1 + 0.05 * u(eng);
    return NoiseDistribution::uniform_box(v2(-a, -b), v2(a, b));
  };
  LawSetup s{{polygon(7, 1.5), box_noise()}, {polygon(5, 0.3), box_noise()}, {}};
  const double lo = 0.5 + 0.5 * u(eng);
  s.psi = {lo, lo + 0.5 * u(eng)};
  return s;
}

Outcome expectation_laws() {
  LawOptions opt;
  opt.samples = 10000;
  opt.equality_tolerance = 0.05;
  opt.inclusion_se = 2.0;
  std::mt19937_64 eng(4);
  int passed = 0, total = 0;
  std::string failures;
  double worst_eq = 0.0;
  for (int cfg = 0; cfg < 5; ++cfg) {
    const auto setup = random_law_setup(eng);
    for (Law law : kAllLaws) {
      ++total;
      try {
        const auto r = expectation_law_check(law, setup, opt, {40 + static_cast<std::uint64_t>(cfg), 0});
        if (r.equality) worst_eq = std::max(worst_eq, r.value);
        if (r.passed) ++passed;
        else failures += " " + std::string(law_name(law)) + "@" + std::to_string(cfg);
      } catch (const std::exception& e) {
        failures += " " + std::string(law_name(law)) + "@" + std::to_string(cfg) + "(" + e.what() + ")";
      }
    }
  }
  return {passed == total, std::to_string(passed) + "/" + std::to_string(total) +
                               " law checks pass (equalities <= 0.05, inclusions <= 2 SE); worst equality " +
                               fmt("%.4f", worst_eq) + (failures.empty() ? "" : "; failed:" + failures)};
}

// ---- 5 -----------------------------------------------------------------------------------

Outcome kernel_consistency() {
  constexpr double kRatio = 0.5, kAbs = 0.25, kSeconds = 300.0;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> grid;
  for (int k = -15; k <= 15; ++k) grid.push_back(0.1 * k);
  const auto rows = consistency_curve({100, 1000, 10000}, 20, grid, {5, 0});
  const double first = rows.front().median_error;
  const double last = rows.back().median_error;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {last < kRatio * first && last <= kAbs && secs < kSeconds,
          "median Hausdorff n=1e2 " + fmt("%.4f", first) + ", n=1e3 " + fmt("%.4f", rows[1].median_error) +
              ", n=1e4 " + fmt("%.4f", last) + " (< 0.5 x first and <= 0.25), " + fmt("%.1f", secs) + " s (< 300)"};
}

// ---- 6 / 8 ---------------------------------------------------------------------------------

struct Fig2Runs {
  std::map<long, std::vector<EstimationResult>> abp;
  std::vector<EstimationResult> mle_1000;
};

Fig2Runs& fig2_runs(bool with_mle) {
  static Fig2Runs runs;
  static bool abp_done = false;
  static bool mle_done = false;
  const BoxLinearProgram prog(1, 2.0);
  const PriorRegion prior = PriorRegion::fig2_default(1, 0.05);
  const std::vector<long> ns{10, 100, 1000};
  if (!abp_done) {
    for (std::size_t k = 0; k < ns.size(); ++k) {
      for (int r = 0; r < 20; ++r) {
        const auto data = fig2_generate(static_cast<int>(ns[k]), RngSeed{6, 0}.child(k).child(r));
        runs.abp[ns[k]].push_back(abp_estimate(prog, data, prior, 1.0 / static_cast<double>(ns[k])));
      }
    }
    abp_done = true;
  }
  if (with_mle && !mle_done) {
    for (int r = 0; r < 20; ++r) {
      const auto data = fig2_generate(1000, RngSeed{6, 0}.child(2).child(r));
      runs.mle_1000.push_back(mle_estimate(prog, data, prior, NoiseDistribution::uniform_interval(-1.0, 1.0)));
    }
    mle_done = true;
  }
  return runs;
}

Outcome abp_consistency() {
  constexpr double kEps = 0.3, kTheta = 0.3, kSeconds = 600.0;
  const auto t0 = std::chrono::steady_clock::now();
  const auto& runs = fig2_runs(false);
  std::vector<double> me, mt;
  std::string detail = "median |eps-1| / |theta| by n:";
  for (const auto& [n, rs] : runs.abp) {
    std::vector<double> e, t;
    for (const auto& r : rs) {
      e.push_back(std::abs(r.eps_hat - 1.0));
      t.push_back(std::abs(r.theta_hat(0)));
    }
    me.push_back(median(e));
    mt.push_back(median(t));
    detail += " " + std::to_string(n) + ": " + fmt("%.3f", me.back()) + "/" + fmt("%.3f", mt.back());
  }
  // nonincreasing step to step (grid values tie at 0), strictly lower at the end
  bool monotone = true;
  for (std::size_t i = 1; i < me.size(); ++i) monotone = monotone && me[i] <= me[i - 1] && mt[i] <= mt[i - 1];
  monotone = monotone && me.back() < me.front() && mt.back() < mt.front();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {me.back() <= kEps && mt.back() <= kTheta && monotone && secs < kSeconds,
          detail + " (<= 0.3 at n=1000, decreasing" + (monotone ? "" : " VIOLATED") + "), " + fmt("%.1f", secs) +
              " s (< 600)"};
}

Outcome mle_abp_agreement() {
  constexpr int kNeeded = 16;
  const auto& runs = fig2_runs(true);
  const auto& abp = runs.abp.at(1000);
  int agree = 0;
  std::string cells;
  for (std::size_t r = 0; r < abp.size(); ++r) {
    const auto& a = abp[r];
    const auto& m = runs.mle_1000[r];
    const bool ok = std::abs(a.eps_index - m.eps_index) <= 1 && std::abs(a.theta_index - m.theta_index) <= 1;
    agree += ok;
    if (r < 5) cells += " (" + fmt("%.2f", a.eps_hat) + "," + fmt("%.2f", a.theta_hat(0)) + ")vs(" +
                        fmt("%.2f", m.eps_hat) + "," + fmt("%.2f", m.theta_hat(0)) + ")";
  }
  return {agree >= kNeeded, std::to_string(agree) + "/20 replicates within one grid cell (>= 16); first ABP vs MLE:" +
                                cells};
}

// ---- 7 -----------------------------------------------------------------------------------

Outcome kkt_via_inconsistency() {
  constexpr double kSeconds = 300.0;
  const auto t0 = std::chrono::steady_clock::now();
  const BoxQuadraticProgram prog(1.0);
  bool ok = true;
  std::string detail;
  for (double r : {3.0, 6.0}) {
    const double bar = r == 3.0 ? 1.0 : 1.5;
    PriorRegion prior = PriorRegion::fig2_default(0, 0.05);
    prior.w = ConvexSet::interval(-r, r);
    double via_min = INFINITY, kkt_min = INFINITY;
    std::vector<double> abp_err;
    for (int rep = 0; rep < 20; ++rep) {
      const auto data = box_quadratic_generate(10000, r, RngSeed{7, 0}.child(static_cast<std::uint64_t>(r)).child(rep), 1.0);
      via_min = std::min(via_min, via_estimate(prog, data, prior).eps_hat);
      kkt_min = std::min(kkt_min, kkt_estimate(prog, data, prior).eps_hat);
      abp_err.push_back(std::abs(abp_estimate(prog, data, prior).eps_hat - 1.0));
    }
    const bool level = via_min > bar && kkt_min > bar;
    ok = ok && level;
    if (r == 6.0) ok = ok && median(abp_err) <= 0.3;
    detail += "r=" + fmt("%.0f", r) + ": min VIA " + fmt("%.3f", via_min) + ", min KKT " + fmt("%.3f", kkt_min) +
              " (> " + fmt("%.1f", bar) + "), ABP median |eps-1| " + fmt("%.3f", median(abp_err)) +
              (r == 6.0 ? " (<= 0.3)" : "") + "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {ok && secs < kSeconds, detail + fmt("%.1f", secs) + " s (< 300)"};
}

// ---- 9 -----------------------------------------------------------------------------------

Outcome rdf_gradients() {
  constexpr double kTol = 1e-6;
  constexpr double kStep = 1e-6;
  std::mt19937_64 eng(9);
  std::uniform_real_distribution<double> u(-2.0, 2.0), lam(0.0, 1.5), mu(0.1, 2.0);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int dim = 1 + t % 2;
    const BoxLinearProgram prog(dim, 2.0);
    Vec uu(dim), th(dim), l(2 * dim);
    for (int i = 0; i < dim; ++i) {
      uu(i) = u(eng);
      th(i) = u(eng);
    }
    for (int i = 0; i < 2 * dim; ++i) l(i) = lam(eng);
    const double m = mu(eng);
    const auto v = rdf_eval(prog, uu, th, l, m);
    for (int i = 0; i < dim; ++i) {
      Vec a = th, b = th;
      a(i) += kStep;
      b(i) -= kStep;
      const double fd = (rdf_eval(prog, uu, a, l, m).value - rdf_eval(prog, uu, b, l, m).value) / (2 * kStep);
      worst = std::max(worst, std::abs(fd - v.grad_theta(i)));
    }
    for (int i = 0; i < 2 * dim; ++i) {
      Vec a = l, b = l;
      a(i) += kStep;
      b(i) = std::max(0.0, b(i) - kStep);
      const double fd = (rdf_eval(prog, uu, th, a, m).value - rdf_eval(prog, uu, th, b, m).value) / (a(i) - b(i));
      worst = std::max(worst, std::abs(fd - v.grad_lambda(i)));
    }
  }
  return {worst <= kTol, "max |analytic - central difference| " + fmt("%.2e", worst) + " over 100 points (<= 1e-6)"};
}

// ---- 10 ----------------------------------------------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}

Outcome determinism(const fs::path& presets) {
  std::vector<fs::path> configs;
  if (fs::is_directory(presets)) {
    for (const auto& e : fs::directory_iterator(presets)) {
      if (e.path().extension() == ".json") configs.push_back(e.path());
    }
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) return {false, "no preset configs found in " + presets.string()};
  int same = 0;
  std::string diffs;
  for (const auto& path : configs) {
    auto config = parse_config_file(path);
    const auto dir = fs::temp_directory_path() / ("setstat_det_" + path.stem().string());
    config.output_dir = dir.string();
    fs::remove_all(dir);
    run(config);
    const auto first = snapshot(dir);
    fs::remove_all(dir);
    run(config);
    const auto second = snapshot(dir);
    fs::remove_all(dir);
    if (first == second && !first.empty()) ++same;
    else diffs += " " + path.stem().string();
  }
  return {same == static_cast<int>(configs.size()),
          std::to_string(same) + "/" + std::to_string(configs.size()) + " presets byte-identical on rerun" +
              (diffs.empty() ? "" : "; differ:" + diffs)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setstat acceptance checks"};
  std::string presets = "presets";
  std::vector<int> only;
  app.add_option("--presets", presets, "directory of preset configs");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"geometry oracle equivalence", geometry_oracles},
      {"strong law for random translated sets", slln},
      {"central limit theorem for random translated sets", clt},
      {"expectation algebra", expectation_laws},
      {"kernel regression consistency", kernel_consistency},
      {"ABP consistency", abp_consistency},
      {"KKT and VIA inconsistency", kkt_via_inconsistency},
      {"MLE and ABP agreement", mle_abp_agreement},
      {"regularised dual gradients", rdf_gradients},
      {"determinism of presets", [&] { return determinism(presets); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
