#include "cckp/online.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cckp/errors.hpp"
#include "cckp/exact.hpp"
#include "cckp/fptas.hpp"
#include "cckp/greedy.hpp"

namespace cckp {

void OnlineParams::validate() const {
  if (!(c >= 0.0 && c <= d && d <= 1.0)) {
    throw DomainError("online parameters need 0 <= c <= d <= 1");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("online parameter beta must lie in (0,1)");
}

std::string OnlineParams::describe() const {
  std::ostringstream out;
  out << "c=" << c << ";d=" << d << ";beta=" << beta;
  if (preset) out << ";preset=" << *preset;
  return out.str();
}

OfflineSolver OfflineSolver::fptas(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0,1)");
  return OfflineSolver(Kind::Fptas, epsilon);
}

OfflineSolver OfflineSolver::parse(const std::string& name, double epsilon) {
  if (name == "exact") return exact();
  if (name == "greedy") return greedy();
  if (name == "fptas") return fptas(epsilon);
  throw InputError("unknown solver '" + name + "'");
}

double OfflineSolver::alpha() const {
  switch (kind_) {
    case Kind::Exact: return 1.0;
    case Kind::Greedy: return 1.0 - 1.0 / std::numbers::e;
    case Kind::Fptas: return 1.0 - epsilon_;
  }
  return 1.0;
}

std::string OfflineSolver::name() const {
  switch (kind_) {
    case Kind::Exact: return "exact";
    case Kind::Greedy: return "greedy";
    case Kind::Fptas: {
      std::ostringstream out;
      out << "fptas(" << epsilon_ << ")";
      return out.str();
    }
  }
  return "?";
}

Solution OfflineSolver::solve(const Instance& inst) const {
  switch (kind_) {
    case Kind::Exact: return exact_bnb(inst);
    case Kind::Greedy: return greedy_cardinality(inst).solution;
    case Kind::Fptas: return fptas_solve(inst, epsilon_);
  }
  return {};
}

std::string phase_name(Phase p) {
  switch (p) {
    case Phase::Sampling: return "sampling";
    case Phase::Secretary: return "secretary";
    case Phase::Knapsack: return "knapsack";
  }
  return "?";
}

std::pair<std::size_t, std::size_t> phase_bounds(const OnlineParams& params, std::size_t n) {
  const double nn = static_cast<double>(n);
  auto s = static_cast<std::size_t>(std::floor(params.c * nn + 1e-9));
  auto t = static_cast<std::size_t>(std::floor(params.d * nn + 1e-9));
  s = std::min(s, n);
  t = std::clamp(t, s, n);
  return {s, t};
}

std::vector<std::size_t> arrival_indices(const Instance& inst,
                                         std::span<const std::string> arrival) {
  if (arrival.size() != inst.size()) {
    throw InputError("arrival has " + std::to_string(arrival.size()) + " ids, instance has " +
                     std::to_string(inst.size()) + " items");
  }
  std::vector<char> seen(inst.size(), 0);
  std::vector<std::size_t> idx;
  idx.reserve(arrival.size());
  for (const auto& id : arrival) {
    const auto j = inst.find(id);
    if (!j) throw InputError("arrival contains unknown item '" + id + "'");
    if (seen[*j]) throw InputError("arrival repeats item '" + id + "'");
    seen[*j] = 1;
    idx.push_back(*j);
  }
  return idx;
}

Instance restrict_to(const Instance& inst, std::span<const std::size_t> items) {
  std::vector<std::size_t> sorted(items.begin(), items.end());
  std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
    return inst.items[a].id < inst.items[b].id;
  });
  Instance sub;
  sub.name = inst.name;
  sub.weight_capacity = inst.weight_capacity;
  sub.cardinality = inst.cardinality;
  sub.items.reserve(sorted.size());
  for (std::size_t j : sorted) sub.items.push_back(inst.items[j]);
  return sub;
}

namespace {

OnlineState initial_state(const Instance& inst) {
  OnlineState st;
  st.residual_weight = inst.weight_capacity;
  st.residual_cardinality = inst.cardinality;
  st.x.assign(inst.size(), 0.0);
  return st;
}

void take(OnlineState& st, std::size_t j, double amount) {
  st.x[j] = amount;
  st.picked.push_back(j);
  st.residual_weight -= amount;
  st.residual_cardinality -= 1;
}

void record(OnlineTrace* trace, const Instance& inst, const OnlineState& st, Phase phase,
            std::size_t j, std::optional<double> suggested, bool forced = false) {
  if (!trace) return;
  OnlineStep step;
  step.phase = phase;
  step.item = inst.items[j].id;
  step.suggested = suggested;
  step.taken = st.x[j];
  step.forced_tail = forced;
  step.residual_weight = st.residual_weight;
  step.residual_cardinality = st.residual_cardinality;
  trace->steps.push_back(std::move(step));
}

}  // namespace

OnlineState run_selection_phases(const Instance& inst, std::span<const std::size_t> arrival,
                                 const OnlineParams& params, OnlineTrace* trace) {
  params.validate();
  const auto [s_end, t_end] = phase_bounds(params, arrival.size());
  if (trace) {
    trace->sampling_end = s_end;
    trace->secretary_end = t_end;
  }
  OnlineState st = initial_state(inst);
  for (std::size_t l = 0; l < t_end; ++l) {
    const std::size_t j = arrival[l];
    const Item& item = inst.items[j];
    const bool beats = !st.threshold || ranks_above(item, inst.items[*st.threshold]);
    if (l < s_end) {
      if (beats) st.threshold = j;
      record(trace, inst, st, Phase::Sampling, j, std::nullopt);
    } else {
      if (beats && st.residual_cardinality == inst.cardinality &&
          st.residual_weight > kTolerance) {
        take(st, j, std::min(item.capacity(), st.residual_weight));
      }
      record(trace, inst, st, Phase::Secretary, j, std::nullopt);
    }
    st.step = l + 1;
  }
  return st;
}

OnlineResult run_online(const Instance& inst, std::span<const std::string> arrival,
                        const OnlineParams& params, const OfflineSolver& solver,
                        OnlineOptions options) {
  const auto order = arrival_indices(inst, arrival);
  OnlineResult result;
  OnlineState st = run_selection_phases(inst, order, params, &result.trace);
  const std::size_t n = order.size();

  for (std::size_t l = st.step; l < n; ++l) {
    const std::size_t j = order[l];
    const bool open = st.residual_weight > kTolerance && st.residual_cardinality >= 1;
    std::optional<double> suggested;
    bool forced = false;
    if (open) {
      const bool last = l + 1 == n;
      if (options.greedy_tail && last) {
        take(st, j, std::min(inst.items[j].capacity(), st.residual_weight));
        forced = true;
      } else {
        const Instance sub = restrict_to(inst, std::span(order).first(l + 1));
        const Solution s = solver.solve(sub);
        const double x = s.at(inst.items[j].id);
        suggested = x;
        if (x > 0.0) take(st, j, std::min(params.beta * x, st.residual_weight));
      }
    }
    st.step = l + 1;
    record(&result.trace, inst, st, Phase::Knapsack, j, suggested, forced);
  }
  result.solution = make_solution(inst, st.x);
  return result;
}

double bound_objective(double c, double d, double beta, std::optional<int> cardinality,
                       BoundVariant variant) {
  if (!(c > 0.0 && c <= d && d <= 1.0)) throw DomainError("bound needs 0 < c <= d <= 1");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("bound needs 0 < beta < 1");
  if (cardinality && *cardinality < 1) throw DomainError("bound needs C >= 1");
  const double first = cardinality ? (c / *cardinality) * std::log(d / c) : 0.0;
  const double lnd = std::log(d);
  double bracket = 0.0;
  if (variant == BoundVariant::General) {
    bracket = (1.0 - d) * (2.0 - beta) / (1.0 - beta) + lnd / (1.0 - beta);
  } else {
    bracket = (1.0 - d) / (1.0 - beta) + beta * lnd / (1.0 - beta);
  }
  return first + (c / d) * beta * bracket;
}

OnlineParams preset_params(int cardinality, int n) {
  if (cardinality < 1 || n < 1) throw DomainError("preset needs C >= 1 and n >= 1");
  if (cardinality == 2) return {0.3775, 0.915, 0.79, "small-C"};
  if (1000LL * cardinality >= 569LL * n) return {0.431, 0.431, 0.431, "large-C"};
  return {0.695, 0.695, 0.560, "general"};
}

}  // namespace cckp
