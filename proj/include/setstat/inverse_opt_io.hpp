#pragma once

#include <iosfwd>

#include <json.hpp>

#include "setstat/inverse_opt.hpp"

namespace setstat {

/// One {"u": [...], "y": [...]} object per line.
void write_observations_jsonl(std::ostream& out, const ObservationDataset& data);
ObservationDataset read_observations_jsonl(std::istream& in);

/// {estimator, eps_hat, theta_hat, objective, lambda, skipped,
///  grid: {eps_axis, theta_axis, values}}. theta_axis is a flat array for
/// one-dimensional theta, else an array of axes; values is [eps][theta] with
/// null for +inf.
nlohmann::json to_json(const EstimationResult& r);

/// Grid dump: eps, theta_0.., value (inf for the sentinel).
void write_grid_csv(std::ostream& out, const EstimationResult& r);

}  // namespace setstat
