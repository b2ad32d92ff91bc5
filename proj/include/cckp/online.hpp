#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cckp/model.hpp"

namespace cckp {

// Phase boundaries c, d (fractions of n) and the knapsack-phase scaling beta.
struct OnlineParams {
  double c = 0.0;
  double d = 0.0;
  double beta = 0.5;
  std::optional<std::string> preset;

  // Throws DomainError unless 0 <= c <= d <= 1 and 0 < beta < 1.
  void validate() const;
  std::string describe() const;
};

// Deterministic offline solver applied to the set of items seen so far.
class OfflineSolver {
 public:
  enum class Kind { Exact, Greedy, Fptas };

  static OfflineSolver exact() { return OfflineSolver(Kind::Exact, 0.0); }
  static OfflineSolver greedy() { return OfflineSolver(Kind::Greedy, 0.0); }
  static OfflineSolver fptas(double epsilon);
  // "exact", "greedy" or "fptas" (epsilon used only by the latter).
  static OfflineSolver parse(const std::string& name, double epsilon = 0.1);

  Kind kind() const { return kind_; }
  double epsilon() const { return epsilon_; }
  // Approximation guarantee: 1, 1 - 1/e, or 1 - epsilon.
  double alpha() const;
  std::string name() const;

  Solution solve(const Instance& inst) const;

 private:
  OfflineSolver(Kind kind, double epsilon) : kind_(kind), epsilon_(epsilon) {}
  Kind kind_;
  double epsilon_;
};

enum class Phase { Sampling, Secretary, Knapsack };
std::string phase_name(Phase p);

struct OnlineStep {
  Phase phase = Phase::Sampling;
  std::string item;
  std::optional<double> suggested;  // sub-solver utilization, knapsack phase only
  double taken = 0.0;
  bool forced_tail = false;  // taken by the optional last-item fill
  double residual_weight = 0.0;
  int residual_cardinality = 0;
};

struct OnlineTrace {
  std::size_t sampling_end = 0;   // floor(c n)
  std::size_t secretary_end = 0;  // floor(d n)
  std::vector<OnlineStep> steps;
};

struct OnlineState {
  std::vector<std::size_t> picked;      // item indices, arrival order
  double residual_weight = 0.0;         // W_A
  int residual_cardinality = 0;         // C_A
  std::optional<std::size_t> threshold; // item holding r*, if any
  std::vector<double> x;                // dense utilization
  std::size_t step = 0;                 // arrivals processed
};

struct OnlineOptions {
  // Fill the last arrival with whatever capacity remains.
  bool greedy_tail = false;
};

struct OnlineResult {
  Solution solution;
  OnlineTrace trace;
};

// Phase boundaries floor(c n), floor(d n).
std::pair<std::size_t, std::size_t> phase_bounds(const OnlineParams& params, std::size_t n);

// Item indices of `arrival`; throws InputError unless it is a permutation
// of all item ids.
std::vector<std::size_t> arrival_indices(const Instance& inst,
                                         std::span<const std::string> arrival);

// Runs the sampling and secretary phases only. Returns the state at the
// start of the knapsack phase; `trace` receives one step per arrival.
OnlineState run_selection_phases(const Instance& inst, std::span<const std::size_t> arrival,
                                 const OnlineParams& params, OnlineTrace* trace = nullptr);

// Three-phase online algorithm in the random-order model.
OnlineResult run_online(const Instance& inst, std::span<const std::string> arrival,
                        const OnlineParams& params, const OfflineSolver& solver,
                        OnlineOptions options = {});

// The instance restricted to `items`, items sorted by id.
Instance restrict_to(const Instance& inst, std::span<const std::size_t> items);

enum class BoundVariant { General, LargeC };

// Asymptotic lower bound on E[ALG]/(alpha OPT):
//   general: (c/C) ln(d/c) + (c/d) beta [(1-d)(2-beta)/(1-beta) + ln(d)/(1-beta)]
//   large_C: (c/C) ln(d/c) + (c/d) beta [(1-d)/(1-beta) + beta ln(d)/(1-beta)]
// `cardinality` empty means C -> infinity (first term vanishes).
// Requires 0 < c <= d <= 1 and 0 < beta < 1.
double bound_objective(double c, double d, double beta, std::optional<int> cardinality,
                       BoundVariant variant);

// C = 2 -> (0.3775, 0.915, 0.79); C >= 0.569 n -> (0.431, 0.431, 0.431);
// otherwise (0.695, 0.695, 0.560).
OnlineParams preset_params(int cardinality, int n);

}  // namespace cckp
