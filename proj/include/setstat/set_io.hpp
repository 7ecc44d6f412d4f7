#pragma once

#include <string>

#include <json.hpp>

#include "setstat/convex_set.hpp"

namespace setstat {

/// {"type": "vpoly"|"zonotope"|"ball"|"box", ...fields}; doubles round-trip exactly.
nlohmann::json to_json(const ConvexSet& c);
ConvexSet set_from_json(const nlohmann::json& j);

nlohmann::json vec_to_json(const Vec& v);
Vec vec_from_json(const nlohmann::json& j, const char* field = "vector");

}  // namespace setstat
