#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

// Entry of the density-sorted component sequence. Ranked by density
// descending, ties by (item id, component index) ascending.
struct RankedComponent {
  std::size_t item = 0;       // index into Instance::items
  std::size_t component = 0;  // index into Item::components
  double density = 0.0;
  double weight = 0.0;
  double utility = 0.0;
};

// A set of items of one particular instance, held as sorted indices.
class SubsetRef {
 public:
  SubsetRef() = default;

  // Throws InputError on unknown or repeated ids.
  static SubsetRef from_ids(const Instance& inst, std::span<const std::string> ids);
  static SubsetRef all(const Instance& inst);
  static SubsetRef from_indices(const Instance& inst, std::vector<std::size_t> indices);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  bool contains(std::size_t item) const;
  SubsetRef with(std::size_t item) const;
  SubsetRef without(std::size_t item) const;

 private:
  std::vector<std::size_t> indices_;
};

std::vector<RankedComponent> rank_components(const Instance& inst,
                                             const SubsetRef& subset);

// Optimal solution of the instance restricted to `subset` with the
// cardinality constraint dropped: density-greedy fill of W.
Solution solve_relaxed(const Instance& inst, const SubsetRef& subset);

// G(subset): objective of solve_relaxed; 0 for the empty set.
double g_value(const Instance& inst, const SubsetRef& subset);

// G(subset + j) - G(subset). Throws InputError if j is already in subset.
double marginal_gain(const Instance& inst, const SubsetRef& subset,
                     const std::string& item_id);

// Ranks the instance's components once and evaluates G on membership masks
// by a filtered scan. Each evaluation is O(m).
class RelaxedEvaluator {
 public:
  explicit RelaxedEvaluator(const Instance& inst);

  // member[j] != 0 marks item j as part of the subset.
  double value(std::span<const char> member) const;
  // G(member + {extra}) without touching the mask.
  double value_with(std::span<const char> member, std::size_t extra) const;
  // Dense utilizations of the relaxed optimum over `member`.
  std::vector<double> fill(std::span<const char> member) const;

  const std::vector<RankedComponent>& ranking() const { return ranking_; }

 private:
  double weight_capacity_;
  std::vector<RankedComponent> ranking_;
  std::size_t num_items_;
};

}  // namespace cckp
