#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "setstat/harness.hpp"

using namespace setstat;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("setstat_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("minimal invopt config gets its defaults") {
  const auto c = parse_config(json::parse(R"({"kind": "invopt-fit", "params": {"n": 200}})"));
  CHECK(c.kind == ExperimentKind::invopt_fit);
  CHECK(c.params["lambda"].get<double>() == doctest::Approx(1.0 / 200));
  CHECK(c.params["grid_step"].get<double>() == 0.05);
  CHECK(c.params["h"].get<double>() == doctest::Approx(std::pow(200.0, -0.2)));
  CHECK(c.params["estimator"] == "abp");
  CHECK(to_json(c)["params"] == c.params);
}

TEST_CASE("config errors name the field") {
  auto msg = [](const char* text) {
    try {
      parse_config(json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(msg(R"({"kind": "gen-data", "params": {"n": -5}})").rfind("params.n", 0) == 0);
  CHECK(msg(R"({"kind": "gen-data", "colour": 1})").rfind("colour", 0) == 0);
  CHECK(msg(R"({"kind": "gen-data", "params": {"m": 1}})").rfind("params.m", 0) == 0);
  CHECK(msg(R"({"kind": "nope"})").rfind("kind", 0) == 0);
  CHECK(msg(R"({"kind": "slln", "check": ["eps"]})").rfind("check[0]", 0) == 0);
  CHECK(msg(R"({"kind": "invopt-fit", "params": {"estimator": "magic"}})").rfind("params.estimator", 0) == 0);
  CHECK(msg(R"({"kind": "gen-data", "formats": ["xml"]})").rfind("formats[0]", 0) == 0);
  CHECK(msg(R"({"kind": "clt", "params": {"n": 2.5}})").rfind("params.n", 0) == 0);
}

TEST_CASE("config round trip") {
  for (const char* text : {R"({"kind": "invopt-fit", "seed": 4, "params": {"n": 50, "estimator": "mle"}})",
                           R"({"kind": "slln", "check": ["slope"], "formats": ["json"]})",
                           R"({"kind": "kernel-fit", "output_dir": "x"})"}) {
    const auto c = parse_config(json::parse(text));
    CHECK(parse_config(json::parse(to_json(c).dump())) == c);
  }
}

TEST_CASE("gen-data is byte-identical across runs") {
  const auto dir = scratch("gen");
  const auto c = parse_config(
      {{"kind", "gen-data"}, {"seed", 7}, {"output_dir", dir.string()}, {"params", {{"dataset", "fig1"}, {"n", 100}}}});
  run(c);
  const auto first = slurp(dir / "data.jsonl");
  const auto summary = slurp(dir / "summary.json");
  run(c);
  CHECK(first == slurp(dir / "data.jsonl"));
  CHECK(summary == slurp(dir / "summary.json"));
  std::istringstream lines(first);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 100);
  fs::remove_all(dir);
}

TEST_CASE("kernel-fit writes the documented columns") {
  const auto dir = scratch("kfit");
  const auto c = parse_config({{"kind", "kernel-fit"},
                               {"seed", 1},
                               {"output_dir", dir.string()},
                               {"check", {"median_hausdorff"}},
                               {"params", {{"n", 300}, {"max_median_hausdorff", 10.0}}}});
  const auto report = run(c);
  CHECK(report.passed());
  const auto csv = slurp(dir / "kernel_fit.csv");
  CHECK(csv.rfind("u,truth_lo,truth_hi,est_lo,est_hi,hausdorff\n", 0) == 0);
  // the report flag agrees with recomputing the check from the CSV
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<double> errs;
  while (std::getline(in, line)) errs.push_back(std::stod(line.substr(line.rfind(',') + 1)));
  std::sort(errs.begin(), errs.end());
  const double med = errs.size() % 2 ? errs[errs.size() / 2] : 0.5 * (errs[errs.size() / 2 - 1] + errs[errs.size() / 2]);
  CHECK(med == report.metrics["median_hausdorff"].get<double>());
  fs::remove_all(dir);
}

TEST_CASE("a failing requested check fails the report") {
  const auto dir = scratch("fail");
  const auto c = parse_config({{"kind", "invopt-fit"},
                               {"output_dir", dir.string()},
                               {"check", {"eps"}},
                               {"params", {{"n", 20}, {"tolerance", 0.0}, {"grid_step", 0.5}}}});
  const auto report = run(c);
  CHECK_FALSE(report.passed());
  CHECK(fs::exists(dir / "result.json"));
  CHECK(fs::exists(dir / "grid.csv"));
  fs::remove_all(dir);
}
