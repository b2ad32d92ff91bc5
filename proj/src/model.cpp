#include "cckp/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "cckp/errors.hpp"

namespace cckp {

double Item::capacity() const {
  double total = 0.0;
  for (const auto& c : components) total += c.weight;
  return total;
}

double Item::total_utility() const {
  double total = 0.0;
  for (const auto& c : components) total += c.utility;
  return total;
}

std::size_t Instance::num_components() const {
  std::size_t m = 0;
  for (const auto& item : items) m += item.components.size();
  return m;
}

std::optional<std::size_t> Instance::find(std::string_view id) const {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].id == id) return i;
  }
  return std::nullopt;
}

std::size_t Instance::index_of(std::string_view id) const {
  auto idx = find(id);
  if (!idx) {
    throw InputError("unknown item id '" + std::string(id) + "' in instance '" +
                     name + "'");
  }
  return *idx;
}

double Solution::at(std::string_view id) const {
  auto it = utilization.find(std::string(id));
  return it == utilization.end() ? 0.0 : it->second;
}

double eval_utility(const Item& item, double x) {
  if (!std::isfinite(x) || x < -kTolerance) {
    std::ostringstream msg;
    msg << "utilization " << x << " of item '" << item.id << "' is negative";
    throw DomainError(msg.str());
  }
  const double cap = item.capacity();
  if (x > cap + kTolerance) {
    std::ostringstream msg;
    msg << "utilization " << x << " of item '" << item.id
        << "' exceeds its capacity " << cap;
    throw DomainError(msg.str());
  }
  double remaining = std::clamp(x, 0.0, cap);
  double value = 0.0;
  for (const auto& c : item.components) {
    if (remaining <= 0.0) break;
    if (remaining >= c.weight) {
      value += c.utility;
      remaining -= c.weight;
    } else {
      value += c.density() * remaining;
      remaining = 0.0;
    }
  }
  return value;
}

namespace {

void check_positive_finite(double v, const std::string& what) {
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream msg;
    msg << what << " must be positive and finite, got " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

ValidatedInstance validate_instance(Instance inst) {
  ValidatedInstance out;
  if (inst.items.empty()) {
    throw ValidationError("instance '" + inst.name + "' has no items");
  }
  if (inst.cardinality < 1) {
    throw ValidationError("cardinality capacity C must be >= 1");
  }
  check_positive_finite(inst.weight_capacity, "knapsack capacity W");

  std::set<std::string> seen;
  for (auto& item : inst.items) {
    if (item.id.empty()) throw ValidationError("item with empty id");
    if (!seen.insert(item.id).second) {
      throw ValidationError("duplicate item id '" + item.id + "'");
    }
    if (item.components.empty()) {
      throw ValidationError("item '" + item.id + "' has no components");
    }
    for (std::size_t i = 0; i < item.components.size(); ++i) {
      const auto& c = item.components[i];
      const std::string where =
          "item '" + item.id + "' component " + std::to_string(i);
      check_positive_finite(c.weight, where + " weight");
      check_positive_finite(c.utility, where + " utility");
      if (i > 0 && c.density() > item.components[i - 1].density() + kTolerance) {
        std::ostringstream msg;
        msg << "item '" << item.id << "' is not concave: component " << i
            << " has density " << c.density() << " above component " << i - 1
            << " density " << item.components[i - 1].density();
        throw ValidationError(msg.str());
      }
    }

    const double W = inst.weight_capacity;
    if (item.capacity() > W + kTolerance) {
      std::vector<Component> kept;
      double used = 0.0;
      for (const auto& c : item.components) {
        const double room = W - used;
        if (room <= kTolerance) break;
        if (c.weight <= room) {
          kept.push_back(c);
          used += c.weight;
        } else {
          kept.push_back({room, c.density() * room});
          used = W;
        }
      }
      std::ostringstream msg;
      msg << "item '" << item.id << "' capacity " << item.capacity()
          << " exceeds W=" << W << "; truncated to " << used << " ("
          << item.components.size() - kept.size() << " components dropped)";
      out.warnings.push_back(msg.str());
      item.components = std::move(kept);
    }
  }
  out.instance = std::move(inst);
  return out;
}

SolutionStats objective(const Instance& inst, const Solution& sol) {
  SolutionStats stats;
  for (const auto& [id, x] : sol.utilization) {
    const Item& item = inst.items[inst.index_of(id)];
    if (x < -kTolerance) {
      throw DomainError("negative utilization for item '" + id + "'");
    }
    if (x <= 0.0) continue;
    const double cap = item.capacity();
    if (x > cap + kTolerance) stats.within_item_capacity = false;
    const double used = std::min(x, cap);
    stats.objective += eval_utility(item, used);
    stats.weight_used += x;
    stats.cardinality_used += 1;

    double remaining = used;
    for (const auto& c : item.components) {
      const double take = std::min(remaining, c.weight);
      if (take > kTolerance && take < c.weight - kTolerance) {
        stats.partial_component_count += 1;
      }
      remaining -= take;
      if (remaining <= 0.0) break;
    }
  }
  stats.within_weight = stats.weight_used <= inst.weight_capacity + kTolerance;
  stats.within_cardinality = stats.cardinality_used <= inst.cardinality;
  return stats;
}

Solution canonicalize(const Instance& inst, const Solution& sol) {
  Solution out;
  out.utilization = sol.utilization;
  std::map<ComponentKey, double> per;
  for (const auto& [id, x] : sol.utilization) {
    const Item& item = inst.items[inst.index_of(id)];
    double remaining = std::max(0.0, x);
    for (std::size_t i = 0; i < item.components.size(); ++i) {
      const double take = std::min(remaining, item.components[i].weight);
      per[{id, i}] = take;
      remaining -= take;
    }
  }
  out.per_component = std::move(per);
  return out;
}

Solution make_solution(const Instance& inst, std::span<const double> x) {
  Solution sol;
  for (std::size_t j = 0; j < inst.items.size() && j < x.size(); ++j) {
    if (x[j] > 0.0) sol.utilization[inst.items[j].id] = x[j];
  }
  return sol;
}

std::vector<double> dense_utilization(const Instance& inst, const Solution& sol) {
  std::vector<double> x(inst.items.size(), 0.0);
  for (const auto& [id, v] : sol.utilization) x[inst.index_of(id)] = v;
  return x;
}

bool ranks_above(const Item& a, const Item& b) {
  const double ua = a.total_utility();
  const double ub = b.total_utility();
  if (std::abs(ua - ub) <= kTolerance) return a.id < b.id;
  return ua > ub;
}

std::size_t top_item(const Instance& inst) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < inst.items.size(); ++j) {
    if (ranks_above(inst.items[j], inst.items[best])) best = j;
  }
  return best;
}

}  // namespace cckp
