#pragma once

#include <cstdint>
#include <string>

#include "cckp/model.hpp"

namespace cckp {

enum class Dataset { A, B };

// How C is derived from n.
struct CardinalityRule {
  enum class Kind { Fixed2, Percent, Explicit };
  Kind kind = Kind::Fixed2;
  int value = 2;  // percent for Percent, C for Explicit

  static CardinalityRule fixed2() { return {Kind::Fixed2, 2}; }
  static CardinalityRule percent(int pct) { return {Kind::Percent, pct}; }
  static CardinalityRule explicit_c(int c) { return {Kind::Explicit, c}; }

  // Accepts "2", "30%", "60%" or any positive integer.
  static CardinalityRule parse(const std::string& text);

  // Percent rules give max(1, floor(pct * n / 100)).
  int resolve(int n) const;
  std::string label() const;
};

struct GenConfig {
  Dataset dataset = Dataset::A;
  int n = 10;
  CardinalityRule cardinality = CardinalityRule::fixed2();
  std::uint64_t seed = 0;
};

// Item ids are "j" followed by the 1-based index zero-padded to at least
// three digits, so id order equals generation order.
std::string generated_item_id(int index, int n);

// Two components per item. Draw order per item: r, r', a, a' with r, r' ~
// U[10, 25) and a, a' ~ U[5, 20). Component 1 = (min(a, a'), max(r, r')),
// component 2 = (max(a, a'), min(r, r')).
// W = max(0.3 * sum of item weights, 1 + max item weight).
Instance gen_dataset_a(const GenConfig& cfg);

// First n-1 items and W exactly as dataset A over n-1 items; the last item
// gets a1 ~ U[5, 0.49 W) (drawn last) with components (a1, 10 a1) and
// (W - a1, 7 a1).
Instance gen_dataset_b(const GenConfig& cfg);

Instance generate(const GenConfig& cfg);

// Small random instances for oracle cross-checks: n in [1, max_n],
// C in [1, max_cardinality], 1..max_components components per item,
// W uniform in [0.2, 0.8] of the total capacity. With `integral` set,
// weights and utilities are integers.
struct SmallRandomConfig {
  int max_n = 12;
  int max_cardinality = 4;
  int max_components = 3;
  bool integral = false;
};

Instance gen_small_random(const SmallRandomConfig& cfg, std::uint64_t seed);

std::string dataset_name(Dataset d);
Dataset parse_dataset(const std::string& text);

}  // namespace cckp
