#include "setstat/set_io.hpp"

#include "setstat/errors.hpp"

namespace setstat {

using nlohmann::json;

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Vec vec_from_json(const json& j, const char* field) {
  if (!j.is_array()) throw InvalidArgument(std::string(field) + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument(std::string(field) + ": expected an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json to_json(const ConvexSet& c) {
  json out;
  out["type"] = std::string(c.type_name());
  if (const auto* p = c.as<VertexPolytope>()) {
    out["vertices"] = json::array();
    for (const auto& v : p->vertices) out["vertices"].push_back(vec_to_json(v));
  } else if (const auto* z = c.as<Zonotope>()) {
    out["center"] = vec_to_json(z->center);
    out["generators"] = json::array();
    for (const auto& g : z->generators) out["generators"].push_back(vec_to_json(g));
    out["weights"] = z->weights;
  } else if (const auto* b = c.as<Ball>()) {
    out["center"] = vec_to_json(b->center);
    out["radius"] = b->radius;
  } else {
    const auto* bx = c.as<Box>();
    out["lower"] = vec_to_json(bx->lower);
    out["upper"] = vec_to_json(bx->upper);
  }
  return out;
}

namespace {

const json& field(const json& j, const char* name) {
  if (!j.contains(name)) throw InvalidArgument(std::string("set: missing field '") + name + "'");
  return j.at(name);
}

std::vector<Vec> vec_list(const json& j, const char* name) {
  const json& arr = field(j, name);
  if (!arr.is_array()) throw InvalidArgument(std::string("set: '") + name + "' must be an array");
  std::vector<Vec> out;
  for (const auto& e : arr) out.push_back(vec_from_json(e, name));
  return out;
}

}  // namespace

ConvexSet set_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("set: expected an object");
  const json& type = field(j, "type");
  if (!type.is_string()) throw InvalidArgument("set: 'type' must be a string");
  const auto t = type.get<std::string>();
  if (t == "vpoly") return ConvexSet::polytope(vec_list(j, "vertices"));
  if (t == "zonotope") {
    const json& w = field(j, "weights");
    if (!w.is_array()) throw InvalidArgument("set: 'weights' must be an array");
    std::vector<double> weights;
    for (const auto& e : w) {
      if (!e.is_number()) throw InvalidArgument("set: 'weights' must hold numbers");
      weights.push_back(e.get<double>());
    }
    return ConvexSet::zonotope(vec_from_json(field(j, "center"), "center"), vec_list(j, "generators"),
                               std::move(weights));
  }
  if (t == "ball") {
    const json& r = field(j, "radius");
    if (!r.is_number()) throw InvalidArgument("set: 'radius' must be a number");
    return ConvexSet::ball(vec_from_json(field(j, "center"), "center"), r.get<double>());
  }
  if (t == "box") {
    return ConvexSet::box(vec_from_json(field(j, "lower"), "lower"), vec_from_json(field(j, "upper"), "upper"));
  }
  throw InvalidArgument("set: unknown type '" + t + "'");
}

}  // namespace setstat
