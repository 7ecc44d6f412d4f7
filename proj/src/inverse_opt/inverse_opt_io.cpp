#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "setstat/errors.hpp"
#include "setstat/inverse_opt_io.hpp"
#include "setstat/set_io.hpp"

namespace setstat {

namespace {

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_observations_jsonl(std::ostream& out, const ObservationDataset& data) {
  for (const auto& s : data.samples) {
    out << nlohmann::json{{"u", vec_to_json(s.u)}, {"y", vec_to_json(s.y)}}.dump() << '\n';
  }
}

ObservationDataset read_observations_jsonl(std::istream& in) {
  ObservationDataset data;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_object() || !j.contains("u") || !j.contains("y")) throw InvalidArgument("expected {\"u\", \"y\"}");
      data.samples.push_back({vec_from_json(j.at("u"), "u"), vec_from_json(j.at("y"), "y")});
    } catch (const nlohmann::json::exception& e) {
      throw InvalidArgument("observations line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InvalidArgument& e) {
      throw InvalidArgument("observations line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (data.samples.empty()) throw InvalidArgument("observations file has no samples");
  const auto du = data.samples.front().u.size();
  const auto dy = data.samples.front().y.size();
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.samples[i].u.size() != du || data.samples[i].y.size() != dy) {
      throw DimensionMismatch("observations: sample " + std::to_string(i) + " has inconsistent dimensions");
    }
  }
  return data;
}

nlohmann::json to_json(const EstimationResult& r) {
  nlohmann::json theta_axis;
  if (r.theta_axes.size() == 1) {
    theta_axis = r.theta_axes.front();
  } else {
    theta_axis = nlohmann::json::array();
    for (const auto& a : r.theta_axes) theta_axis.push_back(a);
  }
  const std::size_t t = theta_count(r.theta_axes);
  const std::size_t rows = r.eps_axis.empty() ? 1 : r.eps_axis.size();
  nlohmann::json values = nlohmann::json::array();
  for (std::size_t i = 0; i < rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < t; ++j) {
      const double v = r.values.at(i * t + j);
      if (std::isfinite(v)) row.push_back(v);
      else row.push_back(nullptr);
    }
    values.push_back(std::move(row));
  }
  return {{"estimator", r.estimator},
          {"eps_hat", r.eps_hat},
          {"theta_hat", vec_to_json(r.theta_hat)},
          {"objective", r.objective},
          {"lambda", r.lambda},
          {"skipped", r.skipped},
          {"grid", {{"eps_axis", r.eps_axis}, {"theta_axis", theta_axis}, {"values", values}}}};
}

void write_grid_csv(std::ostream& out, const EstimationResult& r) {
  out << "eps";
  for (std::size_t k = 0; k < r.theta_axes.size(); ++k) out << ",theta_" << k;
  out << ",value\n";
  const std::size_t t = theta_count(r.theta_axes);
  const std::size_t rows = r.eps_axis.empty() ? 1 : r.eps_axis.size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      out << (r.eps_axis.empty() ? std::string("nan") : fmt(r.eps_axis[i]));
      const Vec th = theta_at(r.theta_axes, j);
      for (Eigen::Index k = 0; k < th.size(); ++k) out << ',' << fmt(th(k));
      out << ',' << fmt(r.values.at(i * t + j)) << '\n';
    }
  }
}

}  // namespace setstat
