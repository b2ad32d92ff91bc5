#include "cckp/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "cckp/errors.hpp"
#include "cckp/greedy.hpp"
#include "cckp/relax.hpp"

namespace cckp {

std::uint64_t count_subsets(std::size_t n, std::size_t max_size) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // binom(n, k)
  for (std::size_t k = 0; k <= std::min(n, max_size); ++k) {
    if (k > 0) {
      // binom(n, k) = binom(n, k-1) * (n-k+1) / k, computed without overflow
      // of intermediate products where possible.
      const std::uint64_t num = n - k + 1;
      if (binom > kMax / num) return kMax;
      binom = binom * num / k;
    }
    if (k == 0) continue;
    if (total > kMax - binom) return kMax;
    total += binom;
  }
  return total;
}

Solution exact_enumerate(const Instance& inst, ExactOptions options) {
  const std::size_t n = inst.items.size();
  const std::size_t cap = std::min(n, static_cast<std::size_t>(inst.cardinality));
  const std::uint64_t count = count_subsets(n, cap);
  if (count > options.subset_budget) {
    std::ostringstream msg;
    msg << "exact enumeration needs " << count << " subsets, over the budget of "
        << options.subset_budget;
    throw ResourceError(msg.str());
  }

  const RelaxedEvaluator eval(inst);
  std::vector<char> member(n, 0);
  std::vector<char> best_member(n, 0);
  double best = 0.0;

  // Subsets of each size k in lexicographic order of index combinations.
  for (std::size_t k = 1; k <= cap; ++k) {
    std::vector<std::size_t> pick(k);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      std::fill(member.begin(), member.end(), 0);
      for (std::size_t j : pick) member[j] = 1;
      const double v = eval.value(member);
      if (v > best + kTolerance) {
        best = v;
        best_member = member;
      }
      std::size_t pos = k;
      while (pos > 0 && pick[pos - 1] == n - k + (pos - 1)) --pos;
      if (pos == 0) break;
      ++pick[pos - 1];
      for (std::size_t q = pos; q < k; ++q) pick[q] = pick[q - 1] + 1;
    }
  }
  return canonicalize(inst, make_solution(inst, eval.fill(best_member)));
}

namespace {

class DualBound {
 public:
  explicit DualBound(const Instance& inst) : inst_(inst), value_(inst.items.size()), mass_(inst.items.size()) {
    for (const auto& item : inst.items) {
      for (const auto& c : item.components) top_density_ = std::max(top_density_, c.density());
    }
  }

  // f(mu) and a subgradient. `in` and `open` are disjoint item lists.
  std::pair<double, double> evaluate(double mu, const std::vector<std::size_t>& in,
                                     const std::vector<std::size_t>& open,
                                     std::size_t slots) {
    double f = mu * inst_.weight_capacity;
    double slope = inst_.weight_capacity;
    auto reduced = [&](std::size_t j) {
      double v = 0.0, w = 0.0;
      for (const auto& c : inst_.items[j].components) {
        const double r = c.density();
        if (r <= mu) break;
        v += c.weight * (r - mu);
        w += c.weight;
      }
      value_[j] = v;
      mass_[j] = w;
    };
    for (std::size_t j : in) {
      reduced(j);
      f += value_[j];
      slope -= mass_[j];
    }
    scratch_.assign(open.begin(), open.end());
    for (std::size_t j : scratch_) reduced(j);
    if (slots < scratch_.size()) {
      std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(slots),
                       scratch_.end(),
                       [&](std::size_t a, std::size_t b) { return value_[a] > value_[b]; });
      scratch_.resize(slots);
    }
    for (std::size_t j : scratch_) {
      f += value_[j];
      slope -= mass_[j];
    }
    return {f, slope};
  }

  double minimize(const std::vector<std::size_t>& in, const std::vector<std::size_t>& open,
                  std::size_t slots, double* mu_hint, double stop_below) {
    double best = std::numeric_limits<double>::infinity();
    double best_mu = 0.0;
    auto probe = [&](double mu) {
      auto [f, slope] = evaluate(mu, in, open, slots);
      if (f < best) {
        best = f;
        best_mu = mu;
      }
      return slope;
    };
    if (mu_hint) {
      probe(*mu_hint);
      if (best <= stop_below) {
        return best;
      }
    }
    // f is convex and piecewise linear in mu; bisect on the subgradient sign.
    double lo = 0.0, hi = top_density_;
    for (int it = 0; it < 40 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double slope = probe(mid);
      if (best <= stop_below) break;
      if (slope > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    if (mu_hint) *mu_hint = best_mu;
    return best;
  }

 private:
  const Instance& inst_;
  double top_density_ = 0.0;
  std::vector<double> value_;
  std::vector<double> mass_;
  std::vector<std::size_t> scratch_;
};

class BranchAndBound {
 public:
  BranchAndBound(const Instance& inst, const ExactOptions& options)
      : inst_(inst),
        options_(options),
        eval_(inst),
        dual_(inst),
        n_(inst.items.size()),
        cap_(static_cast<std::size_t>(inst.cardinality)),
        position_(n_) {
    // Branching order: G({j}) descending, then id ascending.
    std::vector<double> single(n_);
    std::vector<char> mask(n_, 0);
    for (std::size_t j = 0; j < n_; ++j) single[j] = eval_.value_with(mask, j);
    order_.resize(n_);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (single[a] != single[b]) return single[a] > single[b];
      return inst.items[a].id < inst.items[b].id;
    });
    for (std::size_t p = 0; p < n_; ++p) position_[order_[p]] = p;

    const Solution seed = greedy_cardinality(inst).solution;
    incumbent_x_ = dense_utilization(inst, seed);
    incumbent_ = objective(inst, seed).objective;
  }

  Solution run(BnbStats* stats) {
    struct Frame {
      BnbNode node;
      double multiplier = 0.0;
    };
    std::vector<Frame> stack;
    stack.push_back({BnbNode{std::vector<char>(n_, 0), 0, 0, 0.0}, 0.0});
    std::vector<char> reachable(n_);
    std::vector<std::size_t> in_list;

    while (!stack.empty()) {
      Frame frame = std::move(stack.back());
      stack.pop_back();
      BnbNode& node = frame.node;
      if (++stats_.nodes > options_.node_budget) {
        std::ostringstream msg;
        msg << "branch and bound exceeded the node budget of " << options_.node_budget;
        throw ResourceError(msg.str());
      }
      for (std::size_t j = 0; j < n_; ++j) {
        reachable[j] = node.decided_in[j] || position_[j] >= node.frontier;
      }
      if (node.in_count == cap_ || node.frontier == n_) {
        ++stats_.leaves;
        offer(node.decided_in);
        continue;
      }
      if (node.in_count + (n_ - node.frontier) <= cap_) {
        // Everything still open fits the cardinality.
        ++stats_.leaves;
        offer(reachable);
        continue;
      }

      const double cutoff = incumbent_ + kTolerance;
      node.upper_bound = eval_.value(reachable);
      if (node.upper_bound <= cutoff) {
        ++stats_.pruned;
        continue;
      }
      in_list.clear();
      for (std::size_t q = 0; q < node.frontier; ++q) {
        if (node.decided_in[order_[q]]) in_list.push_back(order_[q]);
      }
      open_.assign(order_.begin() + static_cast<std::ptrdiff_t>(node.frontier), order_.end());
      node.upper_bound = std::min(
          node.upper_bound,
          dual_.minimize(in_list, open_, cap_ - node.in_count, &frame.multiplier, cutoff));
      if (node.upper_bound <= cutoff) {
        ++stats_.pruned;
        continue;
      }

      const std::size_t j = order_[node.frontier];
      Frame out{BnbNode{node.decided_in, node.in_count, node.frontier + 1, node.upper_bound},
                frame.multiplier};
      Frame in{BnbNode{std::move(node.decided_in), node.in_count + 1, node.frontier + 1,
                       node.upper_bound},
               frame.multiplier};
      in.node.decided_in[j] = 1;
      offer(in.node.decided_in);
      stack.push_back(std::move(out));
      stack.push_back(std::move(in));
    }
    if (stats) *stats = stats_;
    return canonicalize(inst_, make_solution(inst_, incumbent_x_));
  }

 private:
  void offer(const std::vector<char>& member) {
    const double v = eval_.value(member);
    if (v > incumbent_ + kTolerance) {
      incumbent_ = v;
      incumbent_x_ = eval_.fill(member);
    }
  }

  const Instance& inst_;
  ExactOptions options_;
  RelaxedEvaluator eval_;
  DualBound dual_;
  std::size_t n_;
  std::size_t cap_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> position_;
  std::vector<std::size_t> open_;
  double incumbent_ = 0.0;
  std::vector<double> incumbent_x_;
  BnbStats stats_;
};

}  // namespace

Solution exact_bnb(const Instance& inst, ExactOptions options, BnbStats* stats) {
  BranchAndBound bnb(inst, options);
  return bnb.run(stats);
}

double cardinality_dual_bound(const Instance& inst, const std::vector<char>& decided_in,
                              std::size_t in_count, const std::vector<std::size_t>& open,
                              double* mu_hint, double stop_below) {
  std::vector<std::size_t> in;
  for (std::size_t j = 0; j < decided_in.size(); ++j) {
    if (decided_in[j]) in.push_back(j);
  }
  const std::size_t cap = static_cast<std::size_t>(inst.cardinality);
  const std::size_t slots = in_count >= cap ? 0 : cap - in_count;
  DualBound dual(inst);
  return dual.minimize(in, open, slots, mu_hint, stop_below);
}

}  // namespace cckp
