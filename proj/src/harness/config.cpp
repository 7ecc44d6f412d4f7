#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "setstat/harness.hpp"

namespace setstat {

namespace {

using nlohmann::json;

enum class Type { integer, number, string, int_list, num_list, str_list };

struct Field {
  std::string name;
  Type type;
  json fallback;  // null: computed after parsing
  double min = -std::numeric_limits<double>::infinity();
  double max = std::numeric_limits<double>::infinity();
  bool strict_min = false;
  std::vector<std::string> choices{};
};

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<Field> fields_for(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::gen_data:
      return {{"dataset", Type::string, "fig2", -kInf, kInf, false, {"fig1", "fig2", "box_quadratic"}},
              {"n", Type::integer, 100, 1, 1e8},
              {"r", Type::number, 3.0, 0.0},
              {"eps0", Type::number, 1.0, 0.0}};
    case ExperimentKind::sets_demo:
      return {{"vertices", Type::integer, 7, 3, 1000}, {"pairs", Type::integer, 10, 1, 100000}};
    case ExperimentKind::slln:
      return {{"n_values", Type::int_list, json::array({100, 1000}), 1, 1e8},
              {"replicates", Type::integer, 20, 1, 1e6},
              {"body_halfwidth", Type::number, 1.0, 0.0},
              {"noise_halfwidth", Type::number, 0.5, 0.0}};
    case ExperimentKind::clt:
      return {{"n", Type::integer, 1000, 1, 1e8},
              {"replicates", Type::integer, 1000, 2, 1e7},
              {"body_halfwidth", Type::number, 1.0, 0.0},
              {"noise_halfwidth", Type::number, 0.5, 0.0, kInf, true}};
    case ExperimentKind::kernel_fit:
      return {{"n", Type::integer, 1000, 1, 1e8},
              {"h", Type::number, nullptr, 0.0, kInf, true},
              {"kernel", Type::string, "epanechnikov", -kInf, kInf, false, {"epanechnikov", "indicator"}},
              {"u_lo", Type::number, -1.5},
              {"u_hi", Type::number, 1.5},
              {"u_step", Type::number, 0.1, 0.0, kInf, true},
              {"max_median_hausdorff", Type::number, 0.25, 0.0},
              {"data", Type::string, ""}};
    case ExperimentKind::invopt_fit:
      return {{"dataset", Type::string, "fig2", -kInf, kInf, false, {"fig2", "box_quadratic"}},
              {"n", Type::integer, 1000, 1, 1e8},
              {"estimator", Type::string, "abp", -kInf, kInf, false, {"abp", "mle", "via", "kkt", "presmooth"}},
              {"lambda", Type::number, nullptr, 0.0},
              {"h", Type::number, nullptr, 0.0, kInf, true},
              {"grid_step", Type::number, 0.05, 0.0, kInf, true},
              {"r", Type::number, 3.0, 0.0, kInf, true},
              {"eps0", Type::number, 1.0, 0.0},
              {"tolerance", Type::number, 0.3, 0.0},
              {"data", Type::string, ""}};
    case ExperimentKind::compare_estimators:
      return {{"n_values", Type::int_list, json::array({10, 100, 1000}), 2, 1e8},
              {"replicates", Type::integer, 5, 1, 1e6},
              {"estimators", Type::str_list, json::array({"abp", "mle", "via", "kkt"}), -kInf, kInf, false,
               {"abp", "mle", "via", "kkt", "presmooth"}},
              {"grid_step", Type::number, 0.05, 0.0, kInf, true},
              {"u_step", Type::number, 0.1, 0.0, kInf, true}};
  }
  return {};
}

[[noreturn]] void fail(const std::string& field, const std::string& what) { throw ConfigError(field + ": " + what); }

void check_range(const Field& f, double v, const std::string& where) {
  if (!std::isfinite(v)) fail(where, "must be finite");
  if (f.strict_min ? !(v > f.min) : !(v >= f.min)) {
    std::ostringstream msg;
    msg << "must be " << (f.strict_min ? "> " : ">= ") << f.min;
    fail(where, msg.str());
  }
  if (v > f.max) {
    std::ostringstream msg;
    msg << "must be <= " << f.max;
    fail(where, msg.str());
  }
}

json check_scalar(const Field& f, Type t, const json& v, const std::string& where) {
  switch (t) {
    case Type::integer:
      if (!v.is_number_integer()) fail(where, "expected an integer");
      check_range(f, static_cast<double>(v.get<long long>()), where);
      return v.get<long long>();
    case Type::number:
      if (!v.is_number()) fail(where, "expected a number");
      check_range(f, v.get<double>(), where);
      return v.get<double>();
    case Type::string: {
      if (!v.is_string()) fail(where, "expected a string");
      const auto s = v.get<std::string>();
      if (!f.choices.empty() && std::find(f.choices.begin(), f.choices.end(), s) == f.choices.end()) {
        std::string all;
        for (const auto& c : f.choices) all += (all.empty() ? "" : ", ") + c;
        fail(where, "must be one of " + all);
      }
      return s;
    }
    default:
      break;
  }
  return v;
}

json check_value(const Field& f, const json& v, const std::string& where) {
  Type elem = f.type;
  switch (f.type) {
    case Type::int_list: elem = Type::integer; break;
    case Type::num_list: elem = Type::number; break;
    case Type::str_list: elem = Type::string; break;
    default: return check_scalar(f, f.type, v, where);
  }
  if (!v.is_array() || v.empty()) fail(where, "expected a non-empty array");
  json out = json::array();
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(check_scalar(f, elem, v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<std::string> string_list(const json& v, const std::string& where, const std::vector<std::string>& allowed) {
  if (!v.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto at = where + "[" + std::to_string(i) + "]";
    if (!v[i].is_string()) fail(at, "expected a string");
    auto s = v[i].get<std::string>();
    if (std::find(allowed.begin(), allowed.end(), s) == allowed.end()) fail(at, "unknown value '" + s + "'");
    if (std::find(out.begin(), out.end(), s) != out.end()) fail(at, "duplicate value '" + s + "'");
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string_view kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::sets_demo: return "sets-demo";
    case ExperimentKind::slln: return "slln";
    case ExperimentKind::clt: return "clt";
    case ExperimentKind::kernel_fit: return "kernel-fit";
    case ExperimentKind::invopt_fit: return "invopt-fit";
    case ExperimentKind::compare_estimators: return "compare-estimators";
    case ExperimentKind::gen_data: return "gen-data";
  }
  return "?";
}

ExperimentKind kind_from_name(std::string_view name) {
  for (auto k : {ExperimentKind::sets_demo, ExperimentKind::slln, ExperimentKind::clt, ExperimentKind::kernel_fit,
                 ExperimentKind::invopt_fit, ExperimentKind::compare_estimators, ExperimentKind::gen_data}) {
    if (kind_name(k) == name) return k;
  }
  throw ConfigError("kind: unknown experiment kind '" + std::string(name) + "'");
}

std::vector<std::string> available_checks(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sets_demo: return {"cancellation"};
    case ExperimentKind::slln: return {"slope"};
    case ExperimentKind::clt: return {"covariance", "weil"};
    case ExperimentKind::kernel_fit: return {"median_hausdorff"};
    case ExperimentKind::invopt_fit: return {"eps", "theta"};
    case ExperimentKind::compare_estimators: return {"abp_decreasing"};
    case ExperimentKind::gen_data: return {};
  }
  return {};
}

bool ExperimentConfig::wants(std::string_view format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::vector<std::string> top{"kind", "seed", "output_dir", "formats", "check", "params"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(top.begin(), top.end(), key) == top.end()) fail(key, "unknown key");
  }
  ExperimentConfig c;
  if (!doc.contains("kind") || !doc["kind"].is_string()) fail("kind", "required string");
  c.kind = kind_from_name(doc["kind"].get<std::string>());
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
      fail("seed", "expected a nonnegative integer");
    }
    c.seed.seed = s.get<std::uint64_t>();
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string() || doc["output_dir"].get<std::string>().empty()) {
      fail("output_dir", "expected a non-empty string");
    }
    c.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("formats")) {
    c.formats = string_list(doc["formats"], "formats", {"csv", "json"});
    std::sort(c.formats.begin(), c.formats.end());
  }
  if (doc.contains("check")) c.checks = string_list(doc["check"], "check", available_checks(c.kind));

  const json params = doc.value("params", json::object());
  if (!params.is_object()) fail("params", "expected an object");
  const auto fields = fields_for(c.kind);
  for (const auto& [key, _] : params.items()) {
    if (std::none_of(fields.begin(), fields.end(), [&](const Field& f) { return f.name == key; })) {
      fail("params." + key, "unknown key");
    }
  }
  for (const auto& f : fields) {
    const auto where = "params." + f.name;
    if (params.contains(f.name)) c.params[f.name] = check_value(f, params[f.name], where);
    else if (!f.fallback.is_null()) c.params[f.name] = f.fallback;
  }

  auto& p = c.params;
  if (p.contains("n") && !p.contains("lambda") &&
      std::any_of(fields.begin(), fields.end(), [](const Field& f) { return f.name == "lambda"; })) {
    p["lambda"] = 1.0 / p["n"].get<double>();
  }
  if (p.contains("n") && !p.contains("h") &&
      std::any_of(fields.begin(), fields.end(), [](const Field& f) { return f.name == "h"; })) {
    // one-dimensional covariate: d = 1
    p["h"] = std::pow(p["n"].get<double>(), -1.0 / 5.0);
  }
  if (c.kind == ExperimentKind::kernel_fit && !(p["u_lo"].get<double>() <= p["u_hi"].get<double>())) {
    fail("params.u_hi", "must be >= u_lo");
  }
  return c;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  return {{"kind", kind_name(c.kind)}, {"seed", c.seed.seed},     {"output_dir", c.output_dir},
          {"formats", c.formats},      {"check", c.checks},       {"params", c.params}};
}

}  // namespace setstat
