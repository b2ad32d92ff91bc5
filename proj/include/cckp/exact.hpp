#pragma once

#include <cstdint>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

struct ExactOptions {
  // Maximum number of subsets examined by exact_enumerate.
  std::uint64_t subset_budget = 10'000'000;
  // Maximum number of nodes expanded by exact_bnb.
  std::uint64_t node_budget = 10'000'000;
};

struct BnbStats {
  std::uint64_t nodes = 0;
  std::uint64_t pruned = 0;
  std::uint64_t leaves = 0;
};

// Search node: items before `frontier` in branching order are decided.
struct BnbNode {
  std::vector<char> decided_in;  // indexed like Instance::items
  std::size_t in_count = 0;
  std::size_t frontier = 0;
  double upper_bound = 0.0;
};

// Number of nonempty subsets with at most max_size items, saturating at
// UINT64_MAX.
std::uint64_t count_subsets(std::size_t n, std::size_t max_size);

// Ground truth: max over all subsets S, |S| <= C, of G(S).
Solution exact_enumerate(const Instance& inst, ExactOptions options = {});

// Depth-first branch and bound over item inclusion, items ordered by G({j})
// descending, incumbent seeded with the greedy solution.
Solution exact_bnb(const Instance& inst, ExactOptions options = {},
                   BnbStats* stats = nullptr);

// Upper bound on G(S) over all S with decided_in <= S <= decided_in + open
// and |S| <= C. Minimizes, over a multiplier mu on the weight constraint,
//   mu W + sum_{in} v_j(mu) + (top C - |in| of v_j(mu) over open)
// with v_j(mu) = sum_i w_ji (r_ji - mu)^+. `mu_hint` is tried first and
// receives the best multiplier found.
double cardinality_dual_bound(const Instance& inst, const std::vector<char>& decided_in,
                              std::size_t in_count, const std::vector<std::size_t>& open,
                              double* mu_hint = nullptr, double stop_below = -1.0);

}  // namespace cckp
