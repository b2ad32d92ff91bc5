#pragma once

#include <string>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

struct GreedyStep {
  std::string item;
  double value = 0.0;  // G after adding `item`
  double gain = 0.0;
};

struct GreedyTrace {
  std::vector<GreedyStep> steps;
};

struct GreedyOptions {
  // Stop as soon as the best marginal gain is <= kTolerance. Disabling it
  // always runs min(C, n) rounds.
  bool early_stop = true;
};

struct GreedyResult {
  Solution solution;
  GreedyTrace trace;
};

// Submodular greedy: grow T' by argmax_j G(T' + j) for up to C rounds (ties
// by item id), then return the relaxed optimum over T'. Guarantees at least
// (1 - 1/e) of the optimum.
GreedyResult greedy_cardinality(const Instance& inst, GreedyOptions options = {});

// max_j (G({j}) - G(T) + G(T - j)) / G({j}). Diagnostic only.
double curvature(const Instance& inst);

}  // namespace cckp
