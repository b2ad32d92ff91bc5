#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cckp {

// Absolute tolerance for every feasibility and density comparison.
inline constexpr double kTolerance = 1e-9;

// One linear segment of an item's concave utility. `utility` is the total
// utility of consuming the whole segment.
struct Component {
  double weight = 0.0;
  double utility = 0.0;

  double density() const { return utility / weight; }

  friend bool operator==(const Component&, const Component&) = default;
};

struct Item {
  std::string id;
  std::vector<Component> components;  // fill order, densities decreasing

  double capacity() const;       // sum of component weights
  double total_utility() const;  // utility at full capacity

  friend bool operator==(const Item&, const Item&) = default;
};

struct Instance {
  std::string name;
  double weight_capacity = 0.0;  // W
  int cardinality = 0;           // C
  std::vector<Item> items;

  std::size_t size() const { return items.size(); }
  std::size_t num_components() const;

  // Index of the item with the given id, if any.
  std::optional<std::size_t> find(std::string_view id) const;
  // Index of the item with the given id; throws InputError if unknown.
  std::size_t index_of(std::string_view id) const;

  friend bool operator==(const Instance&, const Instance&) = default;
};

using ComponentKey = std::pair<std::string, std::size_t>;

// Utilization per item in weight units. Items absent from the map are unused.
struct Solution {
  std::map<std::string, double> utilization;
  std::optional<std::map<ComponentKey, double>> per_component;

  double at(std::string_view id) const;

  friend bool operator==(const Solution&, const Solution&) = default;
};

struct SolutionStats {
  double objective = 0.0;
  double weight_used = 0.0;
  int cardinality_used = 0;
  int partial_component_count = 0;

  bool within_weight = true;
  bool within_cardinality = true;
  bool within_item_capacity = true;

  bool feasible() const {
    return within_weight && within_cardinality && within_item_capacity;
  }
};

// R_j(x): fills components in list order. x may exceed the item capacity
// by at most kTolerance, in which case it is clamped.
double eval_utility(const Item& item, double x);

struct ValidatedInstance {
  Instance instance;
  std::vector<std::string> warnings;
};

// Checks the model assumptions and truncates items whose capacity exceeds W
// (dropping or shortening trailing components at constant density).
ValidatedInstance validate_instance(Instance inst);

SolutionStats objective(const Instance& inst, const Solution& sol);

// Expands item utilizations into sequential per-component consumption.
Solution canonicalize(const Instance& inst, const Solution& sol);

// Builds a Solution from a dense utilization vector indexed like inst.items.
// Entries <= 0 are omitted.
Solution make_solution(const Instance& inst, std::span<const double> x);

// Dense utilization vector indexed like inst.items.
std::vector<double> dense_utilization(const Instance& inst, const Solution& sol);

// Strict order on total utility. Equal totals (within kTolerance) are
// broken by item id, the smaller id ranking higher.
bool ranks_above(const Item& a, const Item& b);

// Index of the item with the largest total utility under ranks_above.
std::size_t top_item(const Instance& inst);

}  // namespace cckp
