#include "cckp/relax.hpp"

#include <algorithm>

#include "cckp/errors.hpp"

namespace cckp {

bool SubsetRef::contains(std::size_t item) const {
  return std::binary_search(indices_.begin(), indices_.end(), item);
}

SubsetRef SubsetRef::from_ids(const Instance& inst, std::span<const std::string> ids) {
  std::vector<std::size_t> idx;
  idx.reserve(ids.size());
  for (const auto& id : ids) idx.push_back(inst.index_of(id));
  return from_indices(inst, std::move(idx));
}

SubsetRef SubsetRef::all(const Instance& inst) {
  SubsetRef s;
  s.indices_.resize(inst.items.size());
  for (std::size_t j = 0; j < inst.items.size(); ++j) s.indices_[j] = j;
  return s;
}

SubsetRef SubsetRef::from_indices(const Instance& inst, std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw InputError("subset contains a repeated item");
  }
  if (!indices.empty() && indices.back() >= inst.items.size()) {
    throw InputError("subset references an item index out of range");
  }
  SubsetRef s;
  s.indices_ = std::move(indices);
  return s;
}

SubsetRef SubsetRef::with(std::size_t item) const {
  SubsetRef s = *this;
  auto it = std::lower_bound(s.indices_.begin(), s.indices_.end(), item);
  if (it == s.indices_.end() || *it != item) s.indices_.insert(it, item);
  return s;
}

SubsetRef SubsetRef::without(std::size_t item) const {
  SubsetRef s = *this;
  auto it = std::lower_bound(s.indices_.begin(), s.indices_.end(), item);
  if (it != s.indices_.end() && *it == item) s.indices_.erase(it);
  return s;
}

std::vector<RankedComponent> rank_components(const Instance& inst,
                                             const SubsetRef& subset) {
  std::vector<RankedComponent> ranked;
  for (std::size_t j : subset.indices()) {
    const auto& comps = inst.items[j].components;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      ranked.push_back({j, i, comps[i].density(), comps[i].weight, comps[i].utility});
    }
  }
  std::sort(ranked.begin(), ranked.end(),
            [&](const RankedComponent& a, const RankedComponent& b) {
              if (a.density != b.density) return a.density > b.density;
              const auto& ida = inst.items[a.item].id;
              const auto& idb = inst.items[b.item].id;
              if (ida != idb) return ida < idb;
              return a.component < b.component;
            });
  return ranked;
}

namespace {

// Fills W along the ranking; returns the objective and writes utilizations.
template <typename Accept>
double greedy_fill(const std::vector<RankedComponent>& ranking, double capacity,
                   Accept&& accept, std::vector<double>* x) {
  double remaining = capacity;
  double value = 0.0;
  for (const auto& rc : ranking) {
    if (remaining <= kTolerance) break;
    if (!accept(rc.item)) continue;
    if (rc.weight <= remaining) {
      value += rc.utility;
      remaining -= rc.weight;
      if (x) (*x)[rc.item] += rc.weight;
    } else {
      value += rc.density * remaining;
      if (x) (*x)[rc.item] += remaining;
      remaining = 0.0;
    }
  }
  return value;
}

}  // namespace

Solution solve_relaxed(const Instance& inst, const SubsetRef& subset) {
  const auto ranking = rank_components(inst, subset);
  std::vector<double> x(inst.items.size(), 0.0);
  greedy_fill(ranking, inst.weight_capacity, [](std::size_t) { return true; }, &x);
  return canonicalize(inst, make_solution(inst, x));
}

double g_value(const Instance& inst, const SubsetRef& subset) {
  const auto ranking = rank_components(inst, subset);
  return greedy_fill(ranking, inst.weight_capacity,
                     [](std::size_t) { return true; }, nullptr);
}

double marginal_gain(const Instance& inst, const SubsetRef& subset,
                     const std::string& item_id) {
  const std::size_t j = inst.index_of(item_id);
  if (subset.contains(j)) {
    throw InputError("item '" + item_id + "' is already in the subset");
  }
  return g_value(inst, subset.with(j)) - g_value(inst, subset);
}

RelaxedEvaluator::RelaxedEvaluator(const Instance& inst)
    : weight_capacity_(inst.weight_capacity),
      ranking_(rank_components(inst, SubsetRef::all(inst))),
      num_items_(inst.items.size()) {}

double RelaxedEvaluator::value(std::span<const char> member) const {
  return greedy_fill(ranking_, weight_capacity_,
                     [&](std::size_t j) { return member[j] != 0; }, nullptr);
}

double RelaxedEvaluator::value_with(std::span<const char> member,
                                    std::size_t extra) const {
  return greedy_fill(ranking_, weight_capacity_,
                     [&](std::size_t j) { return j == extra || member[j] != 0; },
                     nullptr);
}

std::vector<double> RelaxedEvaluator::fill(std::span<const char> member) const {
  std::vector<double> x(num_items_, 0.0);
  greedy_fill(ranking_, weight_capacity_,
              [&](std::size_t j) { return member[j] != 0; }, &x);
  return x;
}

}  // namespace cckp
