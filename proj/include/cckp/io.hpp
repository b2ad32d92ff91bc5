#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "cckp/model.hpp"

namespace cckp {

// Instance file: {"name", "W", "C", "items": [{"id", "components":
// [{"weight", "utility"}]}]}. Component order is the fill order.
Instance instance_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Instance& inst);

// Solution file: {"instance": name, "utilization": {id: x}}.
Solution solution_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Solution& sol, const std::string& instance_name);
nlohmann::json to_json(const SolutionStats& stats);

Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

nlohmann::json load_json(const std::filesystem::path& path);
void save_json(const nlohmann::json& j, const std::filesystem::path& path);

// The worked example shipped as data/e1.json: W=4, C=2,
// A=[(2,6),(2,2)], B=[(3,6)], C=[(1,5)].
Instance fixture_e1();

}  // namespace cckp
