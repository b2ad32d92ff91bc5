#include "cckp/fptas.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "cckp/errors.hpp"

namespace cckp {

DpTable::DpTable(std::size_t elements, std::size_t cardinality, std::size_t levels,
                 double sentinel)
    : elements_(elements),
      cardinality_(cardinality),
      levels_(levels),
      sentinel_(sentinel),
      cells_((elements + 1) * (cardinality + 1) * levels, sentinel) {}

namespace {

using LevelFn = std::function<std::int64_t(double)>;

std::vector<std::size_t> id_order(const Instance& inst) {
  std::vector<std::size_t> order(inst.items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return inst.items[a].id < inst.items[b].id;
  });
  return order;
}

std::vector<Element> elements_with(const Instance& inst, std::size_t excluded,
                                   const LevelFn& to_level) {
  std::vector<Element> out;
  for (std::size_t j : id_order(inst)) {
    if (j == excluded) continue;
    double w = 0.0;
    double v = 0.0;
    const auto& comps = inst.items[j].components;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      w += comps[k].weight;
      v += comps[k].utility;
      out.push_back({j, k + 1, w, v, to_level(v)});
    }
  }
  return out;
}

ValueGrid grid_for(const Instance& inst, std::size_t designated, double step,
                   const LevelFn& to_level) {
  std::vector<std::int64_t> full;
  for (std::size_t j = 0; j < inst.items.size(); ++j) {
    if (j != designated) full.push_back(to_level(inst.items[j].total_utility()));
  }
  std::sort(full.begin(), full.end(), std::greater<>());
  const std::size_t take =
      std::min(full.size(), static_cast<std::size_t>(inst.cardinality));
  const std::int64_t top = std::accumulate(full.begin(), full.begin() + take, std::int64_t{0});
  return {step, static_cast<std::size_t>(top) + 1};
}

void check_budget(const Instance& inst, const ValueGrid& grid, double budget) {
  const double states = static_cast<double>(grid.levels) *
                        static_cast<double>(inst.num_components()) *
                        static_cast<double>(inst.cardinality);
  if (states > budget) {
    std::ostringstream msg;
    msg << "dynamic program needs " << states << " states (levels x m x C), "
        << "over the state budget of " << budget;
    throw ResourceError(msg.str());
  }
}

struct Candidate {
  double score = -1.0;
  std::size_t l = 0;
  std::size_t v = 0;
  bool extend = false;
};

// Runs the table for every designated item and returns the best solution
// by exact objective. Ties keep the designated item with the smaller id.
Solution solve_on_grid(const Instance& inst, double step, const LevelFn& to_level,
                       const DpOptions& options) {
  const double W = inst.weight_capacity;
  Solution best;
  double best_value = -1.0;

  for (std::size_t j : id_order(inst)) {
    const auto elements = elements_with(inst, j, to_level);
    const ValueGrid grid = grid_for(inst, j, step, to_level);
    check_budget(inst, grid, options.state_budget);
    const DpTable table = build_dp_table(inst, elements, grid);
    const std::size_t E = table.elements();
    const Item& designated = inst.items[j];

    Candidate pick;
    for (std::size_t l = 0; l <= table.cardinality(); ++l) {
      for (std::size_t v = 0; v < table.levels(); ++v) {
        const double used = table.at(E, l, v);
        if (used > W) continue;
        const double base = static_cast<double>(v) * step;
        if (base > pick.score) pick = {base, l, v, false};
        if (l + 1 <= static_cast<std::size_t>(inst.cardinality)) {
          const double room = std::min(W - used, designated.capacity());
          if (room > kTolerance) {
            const double score = base + eval_utility(designated, room);
            if (score > pick.score) pick = {score, l, v, true};
          }
        }
      }
    }
    if (pick.score < 0.0) continue;

    // Walk back through the table.
    std::vector<double> x(inst.items.size(), 0.0);
    double used = 0.0;
    std::size_t i = E, l = pick.l, v = pick.v;
    while (i > 0 && l > 0) {
      if (table.at(i, l, v) == table.at(i - 1, l, v)) {
        --i;
        continue;
      }
      const Element& e = elements[i - 1];
      x[e.item] = e.weight;
      used += e.weight;
      v -= static_cast<std::size_t>(e.level);
      --l;
      i -= e.prefix;
    }
    if (pick.extend) {
      const double room = std::min(W - used, designated.capacity());
      if (room > kTolerance) x[j] = room;
    }
    Solution sol = make_solution(inst, x);
    const double value = objective(inst, sol).objective;
    if (value > best_value + kTolerance) {
      best_value = value;
      best = std::move(sol);
    }
  }
  return canonicalize(inst, best);
}

}  // namespace

std::vector<Element> build_elements(const Instance& inst, std::size_t excluded,
                                    double step) {
  return elements_with(inst, excluded, [step](double value) {
    return static_cast<std::int64_t>(std::floor(value / step + kTolerance));
  });
}

ValueGrid make_grid(const Instance& inst, std::size_t designated, double step) {
  return grid_for(inst, designated, step, [step](double value) {
    return static_cast<std::int64_t>(std::floor(value / step + kTolerance));
  });
}

DpTable build_dp_table(const Instance& inst, const std::vector<Element>& elements,
                       const ValueGrid& grid) {
  const double W = inst.weight_capacity;
  const std::size_t E = elements.size();
  std::size_t items = 0;
  for (const auto& e : elements) items += (e.prefix == 1);
  const std::size_t L = std::min(static_cast<std::size_t>(inst.cardinality), items);
  const std::size_t V = grid.levels;

  DpTable d(E, L, V, W + 1.0);
  for (std::size_t i = 0; i <= E; ++i) d.at(i, 0, 0) = 0.0;

  for (std::size_t i = 1; i <= E; ++i) {
    const Element& e = elements[i - 1];
    const std::size_t group_start = i - e.prefix;
    const auto level = static_cast<std::size_t>(e.level);
    for (std::size_t l = 1; l <= L; ++l) {
      for (std::size_t v = 0; v < V; ++v) {
        double best = d.at(i - 1, l, v);
        if (level <= v) {
          const double prev = d.at(group_start, l - 1, v - level);
          if (prev <= W) {
            const double cand = prev + e.weight;
            if (cand <= W && cand < best) best = cand;
          }
        }
        d.at(i, l, v) = best;
      }
    }
  }
  return d;
}

Solution fptas_solve(const Instance& inst, double epsilon, DpOptions options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    std::ostringstream msg;
    msg << "epsilon must lie in (0, 1), got " << epsilon;
    throw DomainError(msg.str());
  }
  double top = 0.0;
  for (const auto& item : inst.items) top = std::max(top, item.total_utility());
  const double step = epsilon * top / static_cast<double>(inst.cardinality);
  return solve_on_grid(
      inst, step,
      [step](double value) {
        return static_cast<std::int64_t>(std::floor(value / step + kTolerance));
      },
      options);
}

Solution dp_exact_small(const Instance& inst, double scale, DpOptions options) {
  if (!(scale > 0.0 && scale <= 1e4)) {
    throw DomainError("dp_exact_small: scale must lie in (0, 1e4]");
  }
  double total = 0.0;
  for (const auto& item : inst.items) {
    for (const auto& c : item.components) {
      const double scaled = c.utility * scale;
      if (std::abs(scaled - std::round(scaled)) > 1e-7) {
        throw DomainError("dp_exact_small: utility of item '" + item.id +
                          "' is not integral after scaling");
      }
      total += std::round(scaled);
    }
  }
  if (total > 1e6) {
    throw DomainError("dp_exact_small: total scaled utility exceeds 1e6");
  }
  return solve_on_grid(
      inst, 1.0 / scale,
      [scale](double value) { return static_cast<std::int64_t>(std::llround(value * scale)); },
      options);
}

}  // namespace cckp
