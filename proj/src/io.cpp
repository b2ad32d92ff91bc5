#include "cckp/io.hpp"

#include <fstream>

#include "cckp/errors.hpp"

namespace cckp {

using nlohmann::json;

namespace {

template <typename T>
T required(const json& j, const char* key, const std::string& context) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(context + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InputError(context + ": field '" + key + "' has wrong type (" +
                     e.what() + ")");
  }
}

}  // namespace

Instance instance_from_json(const json& j) {
  Instance inst;
  inst.name = j.value("name", std::string{});
  inst.weight_capacity = required<double>(j, "W", "instance");
  const double c = required<double>(j, "C", "instance");
  if (c != static_cast<double>(static_cast<int>(c))) {
    throw InputError("instance: C must be an integer");
  }
  inst.cardinality = static_cast<int>(c);
  const auto items = required<json>(j, "items", "instance");
  if (!items.is_array()) throw InputError("instance: 'items' must be an array");
  for (const auto& ji : items) {
    Item item;
    item.id = required<std::string>(ji, "id", "item");
    const auto comps = required<json>(ji, "components", "item '" + item.id + "'");
    if (!comps.is_array()) {
      throw InputError("item '" + item.id + "': 'components' must be an array");
    }
    for (const auto& jc : comps) {
      const std::string ctx = "item '" + item.id + "' component";
      item.components.push_back(
          {required<double>(jc, "weight", ctx), required<double>(jc, "utility", ctx)});
    }
    inst.items.push_back(std::move(item));
  }
  return inst;
}

json to_json(const Instance& inst) {
  json items = json::array();
  for (const auto& item : inst.items) {
    json comps = json::array();
    for (const auto& c : item.components) {
      comps.push_back({{"weight", c.weight}, {"utility", c.utility}});
    }
    items.push_back({{"id", item.id}, {"components", std::move(comps)}});
  }
  return {{"name", inst.name},
          {"W", inst.weight_capacity},
          {"C", inst.cardinality},
          {"items", std::move(items)}};
}

Solution solution_from_json(const json& j) {
  Solution sol;
  const auto util = required<json>(j, "utilization", "solution");
  if (!util.is_object()) {
    throw InputError("solution: 'utilization' must be an object");
  }
  for (const auto& [id, x] : util.items()) {
    if (!x.is_number()) throw InputError("solution: utilization of '" + id + "' is not a number");
    sol.utilization[id] = x.get<double>();
  }
  if (j.contains("per_component")) {
    const auto& per = j.at("per_component");
    if (!per.is_array()) throw InputError("solution: 'per_component' must be an array");
    std::map<ComponentKey, double> parts;
    for (const auto& e : per) {
      if (!e.is_object() || !e.contains("id") || !e.contains("component") ||
          !e.contains("weight") || !e.at("id").is_string() ||
          !e.at("component").is_number_unsigned() || !e.at("weight").is_number()) {
        throw InputError("solution: per_component entries need id, component and weight");
      }
      parts[{e.at("id").get<std::string>(), e.at("component").get<std::size_t>()}] =
          e.at("weight").get<double>();
    }
    sol.per_component = std::move(parts);
  }
  return sol;
}

json to_json(const Solution& sol, const std::string& instance_name) {
  json util = json::object();
  for (const auto& [id, x] : sol.utilization) util[id] = x;
  json out = {{"instance", instance_name}, {"utilization", std::move(util)}};
  if (sol.per_component) {
    json per = json::array();
    for (const auto& [key, v] : *sol.per_component) {
      per.push_back({{"id", key.first}, {"component", key.second}, {"weight", v}});
    }
    out["per_component"] = std::move(per);
  }
  return out;
}

json to_json(const SolutionStats& s) {
  return {{"objective", s.objective},
          {"weight_used", s.weight_used},
          {"cardinality_used", s.cardinality_used},
          {"partial_component_count", s.partial_component_count},
          {"feasible", s.feasible()}};
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  save_json(to_json(inst), path);
}

Instance fixture_e1() {
  return Instance{"e1", 4.0, 2,
                  {{"A", {{2, 6}, {2, 2}}}, {"B", {{3, 6}}}, {"C", {{1, 5}}}}};
}

}  // namespace cckp
