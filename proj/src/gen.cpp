#include "cckp/gen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cckp/errors.hpp"
#include "cckp/rng.hpp"

namespace cckp {

CardinalityRule CardinalityRule::parse(const std::string& text) {
  try {
    std::size_t used = 0;
    if (!text.empty() && text.back() == '%') {
      const int pct = std::stoi(text.substr(0, text.size() - 1), &used);
      if (used != text.size() - 1 || pct <= 0) throw InputError("");
      return percent(pct);
    }
    const int c = std::stoi(text, &used);
    if (used != text.size() || c < 1) throw InputError("");
    return c == 2 ? fixed2() : explicit_c(c);
  } catch (const std::exception&) {
    throw InputError("invalid cardinality rule '" + text +
                     "' (expected 2, <pct>% or a positive integer)");
  }
}

int CardinalityRule::resolve(int n) const {
  switch (kind) {
    case Kind::Fixed2:
      return 2;
    case Kind::Percent:
      return std::max(1, static_cast<int>(static_cast<long long>(value) * n / 100));
    case Kind::Explicit:
      return value;
  }
  return value;
}

std::string CardinalityRule::label() const {
  switch (kind) {
    case Kind::Fixed2:
      return "2";
    case Kind::Percent:
      return std::to_string(value) + "%";
    case Kind::Explicit:
      return std::to_string(value);
  }
  return {};
}

std::string generated_item_id(int index, int n) {
  int width = 3;
  for (int v = n; v >= 1000; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "j%0*d", width, index);
  return buf;
}

std::string dataset_name(Dataset d) { return d == Dataset::A ? "A" : "B"; }

Dataset parse_dataset(const std::string& text) {
  if (text == "A" || text == "a") return Dataset::A;
  if (text == "B" || text == "b") return Dataset::B;
  throw InputError("unknown dataset '" + text + "' (expected A or B)");
}

namespace {

std::string instance_name(const GenConfig& cfg, int c) {
  return dataset_name(cfg.dataset) + "_n" + std::to_string(cfg.n) + "_C" +
         std::to_string(c) + "_s" + std::to_string(cfg.seed);
}

// `count` dataset-A items drawn from `rng`; ids are numbered against `n`.
std::vector<Item> draw_items(Rng& rng, int count, int n) {
  std::vector<Item> items;
  items.reserve(static_cast<std::size_t>(count));
  for (int k = 1; k <= count; ++k) {
    const double r1 = rng.uniform(10.0, 25.0);
    const double r2 = rng.uniform(10.0, 25.0);
    const double a1 = rng.uniform(5.0, 20.0);
    const double a2 = rng.uniform(5.0, 20.0);
    items.push_back({generated_item_id(k, n),
                     {{std::min(a1, a2), std::max(r1, r2)},
                      {std::max(a1, a2), std::min(r1, r2)}}});
  }
  return items;
}

double capacity_rule(const std::vector<Item>& items) {
  double total = 0.0;
  double largest = 0.0;
  for (const auto& item : items) {
    total += item.capacity();
    largest = std::max(largest, item.capacity());
  }
  return std::max(0.3 * total, 1.0 + largest);
}

}  // namespace

Instance gen_dataset_a(const GenConfig& cfg) {
  if (cfg.n < 1) throw InputError("dataset A needs n >= 1");
  Rng rng(cfg.seed);
  Instance inst;
  inst.cardinality = cfg.cardinality.resolve(cfg.n);
  inst.name = instance_name(cfg, inst.cardinality);
  inst.items = draw_items(rng, cfg.n, cfg.n);
  inst.weight_capacity = capacity_rule(inst.items);
  return inst;
}

Instance gen_dataset_b(const GenConfig& cfg) {
  if (cfg.n < 2) throw InputError("dataset B needs n >= 2");
  Rng rng(cfg.seed);
  Instance inst;
  inst.cardinality = cfg.cardinality.resolve(cfg.n);
  inst.name = instance_name(cfg, inst.cardinality);
  inst.items = draw_items(rng, cfg.n - 1, cfg.n);
  const double W = capacity_rule(inst.items);
  inst.weight_capacity = W;
  if (0.49 * W < 5.0) {
    throw InputError("dataset B: 0.49 W = " + std::to_string(0.49 * W) +
                     " is below 5, cannot draw the last item");
  }
  const double a1 = rng.uniform(5.0, 0.49 * W);
  inst.items.push_back({generated_item_id(cfg.n, cfg.n), {{a1, 10.0 * a1}, {W - a1, 7.0 * a1}}});
  return inst;
}

Instance gen_small_random(const SmallRandomConfig& cfg, std::uint64_t seed) {
  if (cfg.max_n < 1 || cfg.max_cardinality < 1 || cfg.max_components < 1) {
    throw InputError("small random instances need positive limits");
  }
  Rng rng(seed);
  const int n = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_n)));
  Instance inst;
  inst.cardinality =
      1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_cardinality)));
  inst.name = "rand_n" + std::to_string(n) + "_C" + std::to_string(inst.cardinality) + "_s" +
              std::to_string(seed);
  double total = 0.0;
  for (int k = 1; k <= n; ++k) {
    const int parts =
        1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_components)));
    Item item{generated_item_id(k, n), {}};
    for (int p = 0; p < parts; ++p) {
      Component comp;
      if (cfg.integral) {
        comp.weight = static_cast<double>(1 + rng.below(10));
        comp.utility = static_cast<double>(1 + rng.below(30));
      } else {
        comp.weight = rng.uniform(0.5, 10.0);
        comp.utility = rng.uniform(1.0, 30.0);
      }
      item.components.push_back(comp);
    }
    std::stable_sort(item.components.begin(), item.components.end(),
                     [](const Component& a, const Component& b) {
                       return a.utility * b.weight > b.utility * a.weight;
                     });
    total += item.capacity();
    inst.items.push_back(std::move(item));
  }
  inst.weight_capacity = rng.uniform(0.2, 0.8) * total;
  if (cfg.integral) inst.weight_capacity = std::max(1.0, std::round(inst.weight_capacity));
  return inst;
}

Instance generate(const GenConfig& cfg) {
  return cfg.dataset == Dataset::A ? gen_dataset_a(cfg) : gen_dataset_b(cfg);
}

}  // namespace cckp
