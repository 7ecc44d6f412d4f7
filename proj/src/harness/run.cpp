#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "setstat/errors.hpp"
#include "setstat/geometry.hpp"
#include "setstat/harness.hpp"
#include "setstat/inverse_opt.hpp"
#include "setstat/inverse_opt_io.hpp"
#include "setstat/kernel_regression.hpp"
#include "setstat/random_sets.hpp"
#include "setstat/set_io.hpp"

#ifndef SETSTAT_VERSION
#define SETSTAT_VERSION "0.0.0"
#endif

namespace setstat {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string_view> header) {
    bool first = true;
    for (auto h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  Csv& row() {
    fresh_ = true;
    return *this;
  }
  Csv& operator<<(double v) { return cell(num(v)); }
  Csv& operator<<(long v) { return cell(std::to_string(v)); }
  Csv& operator<<(int v) { return cell(std::to_string(v)); }
  Csv& operator<<(std::size_t v) { return cell(std::to_string(v)); }
  Csv& operator<<(const std::string& v) { return cell(v); }
  Csv& end() {
    out_ << '\n';
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  Csv& cell(const std::string& s) {
    out_ << (fresh_ ? "" : ",") << s;
    fresh_ = false;
    return *this;
  }
  std::ostringstream out_;
  bool fresh_ = true;
};

class Context {
 public:
  Context(const ExperimentConfig& config, RunReport& report) : config_(config), report_(report) {
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) throw Error("output_dir '" + config.output_dir + "': " + ec.message());
  }

  const json& p(const char* key) const { return config_.params.at(key); }
  const ExperimentConfig& config() const { return config_; }
  json& metrics() { return report_.metrics; }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = fs::path(config_.output_dir) / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw Error("write failed for '" + path.string() + "'");
    report_.files.push_back(name);
  }
  void csv(const std::string& name, const Csv& table) {
    if (config_.wants("csv")) write(name, table.str());
  }
  void json_file(const std::string& name, const json& doc) {
    if (config_.wants("json")) write(name, doc.dump(2) + "\n");
  }
  void check(const std::string& name, bool ok) {
    if (std::find(config_.checks.begin(), config_.checks.end(), name) != config_.checks.end()) report_.checks[name] = ok;
  }

 private:
  const ExperimentConfig& config_;
  RunReport& report_;
};

// ---- sets-demo -----------------------------------------------------------------------

ConvexSet random_polygon(int k, Engine& engine) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec center(2);
  center << -1.0 + 2.0 * unit(engine), -1.0 + 2.0 * unit(engine);
  std::vector<double> angles(static_cast<std::size_t>(k));
  for (auto& a : angles) a = 2.0 * std::numbers::pi * unit(engine);
  std::sort(angles.begin(), angles.end());
  std::vector<Vec> pts;
  for (double a : angles) {
    const double r = 0.5 + unit(engine);
    Vec v(2);
    v << center(0) + r * std::cos(a), center(1) + r * std::sin(a);
    pts.push_back(std::move(v));
  }
  return ConvexSet::polytope(std::move(pts));
}

void run_sets_demo(Context& ctx) {
  const int k = ctx.p("vertices").get<int>();
  const int pairs = ctx.p("pairs").get<int>();
  Csv table{"pair", "hausdorff", "integrated_distance", "cancellation_residual", "sum_vertices"};
  double worst = 0.0;
  json first;
  for (int i = 0; i < pairs; ++i) {
    auto engine = ctx.config().seed.child(static_cast<std::uint64_t>(i)).engine();
    const ConvexSet a = random_polygon(k, engine);
    const ConvexSet b = random_polygon(k, engine);
    const ConvexSet sum = minkowski_sum(a, b);
    const auto back = minkowski_diff(sum, b);
    const double residual = back ? hausdorff(*back, a) : std::numeric_limits<double>::infinity();
    worst = std::max(worst, residual);
    const double h = hausdorff(a, b);
    const double d = integrated_distance(a, b).value;
    table.row() << i << h << d << residual << static_cast<long>(sum.as<VertexPolytope>()->vertices.size());
    table.end();
    if (i == 0) first = {{"a", to_json(a)}, {"b", to_json(b)}, {"sum", to_json(sum)}};
  }
  ctx.csv("sets.csv", table);
  ctx.json_file("pair0.json", first);
  ctx.metrics()["max_cancellation_residual"] = worst;
  ctx.check("cancellation", worst <= 1e-9);
}

// ---- slln / clt -------------------------------------------------------------------------

RaTSModel box_rats(double body, double noise) {
  const Vec half = Vec::Constant(2, body);
  const Vec w = Vec::Constant(2, noise);
  return {ConvexSet::box(-half, half), NoiseDistribution::uniform_box(-w, w)};
}

void run_slln(Context& ctx) {
  const auto model = box_rats(ctx.p("body_halfwidth").get<double>(), ctx.p("noise_halfwidth").get<double>());
  auto n_values = ctx.p("n_values").get<std::vector<long>>();
  const auto rows = slln_curve(model, n_values, ctx.p("replicates").get<int>(), ctx.config().seed);
  Csv table{"n", "mean_error", "median_error"};
  for (const auto& r : rows) {
    table.row() << r.n << r.mean_error << r.median_error;
    table.end();
  }
  ctx.csv("slln.csv", table);
  if (rows.size() >= 2) {
    const double slope = loglog_slope(rows);
    ctx.metrics()["loglog_slope"] = slope;
    ctx.check("slope", slope >= -0.65 && slope <= -0.35);
  } else {
    ctx.check("slope", false);
  }
}

void run_clt(Context& ctx) {
  const auto model = box_rats(ctx.p("body_halfwidth").get<double>(), ctx.p("noise_halfwidth").get<double>());
  const int n = ctx.p("n").get<int>();
  const int reps = ctx.p("replicates").get<int>();
  const auto z = clt_rats_replicates(model, n, reps, ctx.config().seed);
  const auto w = weil_statistic_replicates(model, n, reps, ctx.config().seed);
  const Mat emp = sample_covariance(z);
  const Mat ana = model.noise.covariance();
  const double rel = (emp - ana).norm() / ana.norm();
  double gap = 0.0;
  Csv reps_table{"replicate", "z0", "z1", "weil", "norm"};
  for (int r = 0; r < reps; ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double norm = z[i].norm();
    gap = std::max(gap, std::abs(w[i] - norm));
    reps_table.row() << r << z[i](0) << z[i](1) << w[i] << norm;
    reps_table.end();
  }
  Csv cov{"i", "j", "empirical", "analytic"};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      cov.row() << i << j << emp(i, j) << ana(i, j);
      cov.end();
    }
  }
  ctx.csv("clt_replicates.csv", reps_table);
  ctx.csv("clt_covariance.csv", cov);
  ctx.metrics()["relative_frobenius"] = rel;
  ctx.metrics()["max_weil_gap"] = gap;
  ctx.check("covariance", rel <= 0.1);
  ctx.check("weil", gap <= 1e-10);
}

// ---- kernel-fit -------------------------------------------------------------------------

void run_kernel_fit(Context& ctx) {
  SetRegressionDataset data;
  const auto path = ctx.p("data").get<std::string>();
  if (path.empty()) {
    data = fig1_generate(ctx.p("n").get<int>(), ctx.config().seed);
  } else {
    std::ifstream in(path);
    if (!in) throw Error("params.data: cannot open '" + path + "'");
    data = read_dataset_jsonl(in);
  }
  const Kernel kernel = ctx.p("kernel").get<std::string>() == "indicator" ? Kernel::indicator : Kernel::epanechnikov;
  const double h = ctx.p("h").get<double>();
  const auto grid = grid_axis(ctx.p("u_lo").get<double>(), ctx.p("u_hi").get<double>(), ctx.p("u_step").get<double>());
  Csv table{"u", "truth_lo", "truth_hi", "est_lo", "est_hi", "hausdorff"};
  std::vector<double> errors;
  for (double u : grid) {
    const ConvexSet est = [&] {
      try {
        return estimate(data, kernel, Vec::Constant(1, u), h);
      } catch (const Error& e) {
        throw Error("kernel-fit at u = " + num(u) + ": " + e.what());
      }
    }();
    const ConvexSet truth = fig1_truth(u);
    const auto [tlo, thi] = interval_bounds(truth);
    const auto [elo, ehi] = interval_bounds(est);
    const double err = hausdorff(est, truth);
    errors.push_back(err);
    table.row() << u << tlo << thi << elo << ehi << err;
    table.end();
  }
  ctx.csv("kernel_fit.csv", table);
  const double med = median(errors);
  ctx.metrics()["median_hausdorff"] = med;
  ctx.metrics()["samples"] = data.samples.size();
  ctx.check("median_hausdorff", med <= ctx.p("max_median_hausdorff").get<double>());
}

// ---- inverse optimisation ---------------------------------------------------------------

EstimationResult run_estimator(const std::string& name, const ParametricProgram& prog, const ObservationDataset& data,
                               const PriorRegion& prior, double lambda, double h, const RngSeed& seed) {
  if (name == "abp") return abp_estimate(prog, data, prior, lambda);
  if (name == "via") return via_estimate(prog, data, prior);
  if (name == "kkt") return kkt_estimate(prog, data, prior);
  if (name == "presmooth") return presmooth_estimate(prog, data, h, prior, seed, lambda);
  const auto [lo, hi] = interval_bounds(prior.w);
  return mle_estimate(prog, data, prior, NoiseDistribution::uniform_interval(lo, hi));
}

void run_invopt_fit(Context& ctx) {
  const bool quad = ctx.p("dataset").get<std::string>() == "box_quadratic";
  const BoxLinearProgram linear(1, 2.0);
  const BoxQuadraticProgram quadratic(1.0);
  const ParametricProgram& prog = quad ? static_cast<const ParametricProgram&>(quadratic) : linear;
  const int n = ctx.p("n").get<int>();
  const double r = ctx.p("r").get<double>();
  const double eps0 = quad ? ctx.p("eps0").get<double>() : 1.0;
  ObservationDataset data;
  const auto path = ctx.p("data").get<std::string>();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw Error("params.data: cannot open '" + path + "'");
    data = read_observations_jsonl(in);
  } else if (quad) {
    data = box_quadratic_generate(n, r, ctx.config().seed, eps0);
  } else {
    data = fig2_generate(n, ctx.config().seed);
  }
  PriorRegion prior = PriorRegion::fig2_default(prog.theta_dim(), ctx.p("grid_step").get<double>());
  if (quad) prior.w = ConvexSet::interval(-r, r);
  const auto name = ctx.p("estimator").get<std::string>();
  const auto result = run_estimator(name, prog, data, prior, ctx.p("lambda").get<double>(), ctx.p("h").get<double>(),
                                    ctx.config().seed.child(1));
  ctx.json_file("result.json", to_json(result));
  if (ctx.config().wants("csv")) {
    std::ostringstream grid;
    write_grid_csv(grid, result);
    ctx.write("grid.csv", grid.str());
  }
  const double theta_err = result.theta_hat.size() ? result.theta_hat.lpNorm<Eigen::Infinity>() : 0.0;
  ctx.metrics()["eps_hat"] = result.eps_hat;
  ctx.metrics()["theta_hat"] = vec_to_json(result.theta_hat);
  ctx.metrics()["objective"] = result.objective;
  ctx.metrics()["skipped"] = result.skipped;
  ctx.metrics()["samples"] = data.size();
  const double tol = ctx.p("tolerance").get<double>();
  ctx.check("eps", std::abs(result.eps_hat - eps0) <= tol);
  ctx.check("theta", theta_err <= tol);
}

// Mean over a u-grid of the Hausdorff distance between S(u, eps, theta) and the truth S(u, 1, 0).
double solution_set_error(const BoxLinearProgram& prog, const EstimationResult& r, const std::vector<double>& grid) {
  double total = 0.0;
  Interval est;
  Interval truth;
  const Vec zero = Vec::Zero(1);
  for (double u : grid) {
    const Vec uu = Vec::Constant(1, u);
    prog.solution_interval(uu, r.eps_hat, r.theta_hat, est);
    prog.solution_interval(uu, 1.0, zero, truth);
    total += std::max(std::abs(est.lo - truth.lo), std::abs(est.hi - truth.hi));
  }
  return total / static_cast<double>(grid.size());
}

void run_compare(Context& ctx) {
  const BoxLinearProgram prog(1, 2.0);
  auto n_values = ctx.p("n_values").get<std::vector<long>>();
  const int reps = ctx.p("replicates").get<int>();
  const auto estimators = ctx.p("estimators").get<std::vector<std::string>>();
  const double step = ctx.p("grid_step").get<double>();
  const auto u_grid = grid_axis(-2.0, 2.0, ctx.p("u_step").get<double>());
  const PriorRegion prior = PriorRegion::fig2_default(1, step);

  Csv rows{"estimator", "n", "replicate", "eps_hat", "theta_hat", "eps_error", "theta_error", "set_error"};
  Csv summary{"estimator", "n", "median_eps_error", "median_theta_error", "median_set_error"};
  json medians = json::object();
  for (const auto& name : estimators) {
    for (std::size_t k = 0; k < n_values.size(); ++k) {
      const long n = n_values[k];
      std::vector<double> eps_err;
      std::vector<double> theta_err;
      std::vector<double> set_err;
      for (int r = 0; r < reps; ++r) {
        const RngSeed s = ctx.config().seed.child(k).child(static_cast<std::uint64_t>(r));
        const auto data = fig2_generate(static_cast<int>(n), s);
        EstimationResult res;
        try {
          res = run_estimator(name, prog, data, prior, 1.0 / static_cast<double>(n),
                              default_bandwidth(n, 1), s.child(0));
        } catch (const Error& e) {
          throw Error(name + " at n = " + std::to_string(n) + ", replicate " + std::to_string(r) + ": " + e.what());
        }
        if (r == 0) ctx.json_file("results/" + name + "_n" + std::to_string(n) + ".json", to_json(res));
        eps_err.push_back(std::abs(res.eps_hat - 1.0));
        theta_err.push_back(std::abs(res.theta_hat(0)));
        set_err.push_back(solution_set_error(prog, res, u_grid));
        rows.row() << name << n << r << res.eps_hat << res.theta_hat(0) << eps_err.back() << theta_err.back()
                   << set_err.back();
        rows.end();
      }
      const double me = median(eps_err);
      const double mt = median(theta_err);
      const double ms = median(set_err);
      summary.row() << name << n << me << mt << ms;
      summary.end();
      medians[name].push_back({{"n", n}, {"median_eps_error", me}, {"median_theta_error", mt}, {"median_set_error", ms}});
    }
  }
  ctx.csv("replicates.csv", rows);
  ctx.csv("summary.csv", summary);
  ctx.metrics()["medians"] = medians;

  bool decreasing = medians.contains("abp") && n_values.size() >= 2;
  if (decreasing) {
    std::vector<std::pair<long, double>> abp;
    for (const auto& row : medians["abp"]) abp.emplace_back(row["n"].get<long>(), row["median_set_error"].get<double>());
    std::sort(abp.begin(), abp.end());
    for (std::size_t i = 1; i < abp.size(); ++i) decreasing = decreasing && abp[i].second < abp[i - 1].second;
  }
  ctx.check("abp_decreasing", decreasing);
}

// ---- gen-data ---------------------------------------------------------------------------

void run_gen_data(Context& ctx) {
  const auto dataset = ctx.p("dataset").get<std::string>();
  const int n = ctx.p("n").get<int>();
  std::ostringstream out;
  if (dataset == "fig1") {
    write_dataset_jsonl(out, fig1_generate(n, ctx.config().seed));
  } else if (dataset == "fig2") {
    write_observations_jsonl(out, fig2_generate(n, ctx.config().seed));
  } else {
    write_observations_jsonl(
        out, box_quadratic_generate(n, ctx.p("r").get<double>(), ctx.config().seed, ctx.p("eps0").get<double>()));
  }
  ctx.write("data.jsonl", out.str());
  ctx.metrics()["samples"] = n;
}

}  // namespace

std::string tool_version() { return SETSTAT_VERSION; }

bool RunReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& kv) { return kv.second; });
}

json RunReport::summary() const {
  json c = json::object();
  for (const auto& [name, ok] : checks) c[name] = ok;
  return {{"tool", "setstat"}, {"version", version}, {"config", config},
          {"metrics", metrics}, {"checks", c},        {"files", files}};
}

RunReport run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = to_json(config);
  report.version = tool_version();
  Context ctx(config, report);
  switch (config.kind) {
    case ExperimentKind::sets_demo: run_sets_demo(ctx); break;
    case ExperimentKind::slln: run_slln(ctx); break;
    case ExperimentKind::clt: run_clt(ctx); break;
    case ExperimentKind::kernel_fit: run_kernel_fit(ctx); break;
    case ExperimentKind::invopt_fit: run_invopt_fit(ctx); break;
    case ExperimentKind::compare_estimators: run_compare(ctx); break;
    case ExperimentKind::gen_data: run_gen_data(ctx); break;
  }
  if (config.wants("json")) {
    report.files.push_back("summary.json");
    const fs::path path = fs::path(config.output_dir) / "summary.json";
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out << report.summary().dump(2) << '\n';
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace setstat
