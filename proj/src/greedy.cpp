#include "cckp/greedy.hpp"

#include <algorithm>

#include "cckp/relax.hpp"

namespace cckp {

GreedyResult greedy_cardinality(const Instance& inst, GreedyOptions options) {
  const RelaxedEvaluator eval(inst);
  const std::size_t n = inst.items.size();
  std::vector<char> member(n, 0);

  // Candidates visited in id order so that strict improvement keeps the
  // smallest id on ties.
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.items[a].id < inst.items[b].id;
  });

  GreedyResult result;
  double current = 0.0;
  const auto rounds = std::min<std::size_t>(static_cast<std::size_t>(inst.cardinality), n);
  for (std::size_t round = 0; round < rounds; ++round) {
    std::size_t best = n;
    double best_value = 0.0;
    for (std::size_t j : order) {
      if (member[j]) continue;
      const double v = eval.value_with(member, j);
      if (best == n || v > best_value + kTolerance) {
        best = j;
        best_value = v;
      }
    }
    const double gain = best_value - current;
    if (options.early_stop && gain <= kTolerance) break;
    member[best] = 1;
    current = best_value;
    result.trace.steps.push_back({inst.items[best].id, best_value, gain});
  }

  result.solution = canonicalize(inst, make_solution(inst, eval.fill(member)));
  return result;
}

double curvature(const Instance& inst) {
  const RelaxedEvaluator eval(inst);
  const std::size_t n = inst.items.size();
  std::vector<char> member(n, 1);
  const double full = eval.value(member);
  double gamma = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<char> single(n, 0);
    single[j] = 1;
    const double alone = eval.value(single);
    member[j] = 0;
    const double rest = eval.value(member);
    member[j] = 1;
    if (alone > 0.0) gamma = std::max(gamma, (alone - full + rest) / alone);
  }
  return gamma;
}

}  // namespace cckp
