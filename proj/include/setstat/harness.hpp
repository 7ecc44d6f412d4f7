#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "setstat/rng.hpp"

namespace setstat {

enum class ExperimentKind { sets_demo, slln, clt, kernel_fit, invopt_fit, compare_estimators, gen_data };

std::string_view kind_name(ExperimentKind k);
ExperimentKind kind_from_name(std::string_view name);

/// Config file problems; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::gen_data;
  RngSeed seed;
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::vector<std::string> checks;
  /// Kind-specific parameters with every default filled in.
  nlohmann::json params = nlohmann::json::object();

  bool wants(std::string_view format) const;
  bool operator==(const ExperimentConfig&) const = default;
};

/// Strict parse: unknown keys, wrong types and out-of-range values throw
/// ConfigError. Defaults (lambda = 1/n, h = n^(-1/(d+4)), grid step 0.05)
/// are written into params.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig parse_config_file(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Checks each kind accepts in its "check" list.
std::vector<std::string> available_checks(ExperimentKind kind);

struct RunReport {
  nlohmann::json config;
  /// Summary metrics; tables go to CSV files.
  nlohmann::json metrics = nlohmann::json::object();
  std::map<std::string, bool> checks;
  std::vector<std::string> files;
  double wall_seconds = 0.0;
  std::string version;

  bool passed() const;
  /// Everything except wall-clock, which would break byte-identical reruns.
  nlohmann::json summary() const;
};

/// Runs the experiment and writes its files under config.output_dir.
RunReport run(const ExperimentConfig& config);

std::string tool_version();

}  // namespace setstat
