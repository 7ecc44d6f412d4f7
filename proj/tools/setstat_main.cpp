#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "setstat/errors.hpp"
#include "setstat/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;
constexpr int kRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"setstat: set-valued statistics experiments"};
  app.set_version_flag("--version", setstat::tool_version());
  std::string kind;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<long> n;
  app.add_option("kind", kind, "sets-demo | slln | clt | kernel-fit | invopt-fit | compare-estimators | gen-data")
      ->required();
  app.add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "override config seed");
  app.add_option("--out", out, "override config output_dir");
  app.add_option("--n", n, "override params.n");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  setstat::ExperimentConfig config;
  try {
    std::ifstream in(config_path);
    nlohmann::json doc = nlohmann::json::parse(in);
    if (!doc.is_object()) throw setstat::ConfigError("config: expected a JSON object");
    if (doc.contains("kind") && doc["kind"] != kind) {
      throw setstat::ConfigError("kind: command line says '" + kind + "' but the config says " + doc["kind"].dump());
    }
    doc["kind"] = kind;
    if (seed) doc["seed"] = *seed;
    if (out) doc["output_dir"] = *out;
    if (n) {
      if (!doc.contains("params")) doc["params"] = nlohmann::json::object();
      doc["params"]["n"] = *n;
    }
    config = setstat::parse_config(doc);
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "setstat: " << config_path << ": " << e.what() << '\n';
    return kUsage;
  } catch (const setstat::ConfigError& e) {
    std::cerr << "setstat: invalid config: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto report = setstat::run(config);
    std::cout << report.summary().dump(2) << '\n';
    std::printf("wall_seconds: %.3f\n", report.wall_seconds);
    for (const auto& [name, ok] : report.checks) std::printf("check %s: %s\n", name.c_str(), ok ? "PASS" : "FAIL");
    return report.passed() ? kOk : kCheckFailed;
  } catch (const std::exception& e) {
    std::cerr << "setstat " << kind << ": " << e.what() << '\n';
    return kRuntime;
  }
}
