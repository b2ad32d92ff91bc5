#include <catch_amalgamated.hpp>

#include <random>

#include "cckp/errors.hpp"
#include "cckp/io.hpp"
#include "cckp/model.hpp"
#include "oracles.hpp"

using namespace cckp;
using Catch::Approx;

namespace {

Item item_a() { return {"A", {{2, 6}, {2, 2}}}; }

}  // namespace

TEST_CASE("eval_utility follows the fill order", "[model]") {
  const Item a = item_a();
  CHECK(eval_utility(a, 3.0) == Approx(7.0));
  CHECK(eval_utility(a, 0.0) == 0.0);
  CHECK(eval_utility(a, 4.0) == Approx(8.0));
  CHECK(eval_utility(a, 2.0) == Approx(6.0));
  CHECK(eval_utility(a, 4.0 + 1e-12) == Approx(8.0));
}

TEST_CASE("eval_utility rejects values outside [0, capacity]", "[model]") {
  CHECK_THROWS_AS(eval_utility(item_a(), -0.5), DomainError);
  CHECK_THROWS_AS(eval_utility(item_a(), 4.5), DomainError);
}

TEST_CASE("eval_utility is monotone, concave and matches the min-of-lines form", "[model][prop]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = oracle::random_instance(rng, 4, 2);
    for (const auto& item : inst.items) {
      const double cap = item.capacity();
      double prev = 0.0;
      for (int s = 0; s <= 40; ++s) {
        const double x = cap * s / 40.0;
        const double v = eval_utility(item, x);
        CHECK(v == Approx(oracle::utility_min_of_lines(item, x)).margin(1e-9));
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
      std::uniform_real_distribution<double> u(0.0, cap);
      for (int s = 0; s < 20; ++s) {
        const double x = u(rng), y = u(rng), t = 0.37;
        const double mid = eval_utility(item, t * x + (1 - t) * y);
        CHECK(mid >= t * eval_utility(item, x) + (1 - t) * eval_utility(item, y) - 1e-9);
      }
    }
  }
}

TEST_CASE("validate_instance accepts the small fixture unchanged", "[model]") {
  const Instance e1 = fixture_e1();
  const auto v = validate_instance(e1);
  CHECK(v.instance == e1);
  CHECK(v.warnings.empty());
}

TEST_CASE("validate_instance rejects malformed instances", "[model]") {
  Instance base = fixture_e1();

  Instance increasing = base;
  increasing.items[0].components = {{1, 1}, {1, 2}};
  CHECK_THROWS_AS(validate_instance(increasing), ValidationError);

  Instance empty = base;
  empty.items.clear();
  CHECK_THROWS_AS(validate_instance(empty), ValidationError);

  Instance dup = base;
  dup.items[1].id = "A";
  CHECK_THROWS_AS(validate_instance(dup), ValidationError);

  Instance no_card = base;
  no_card.cardinality = 0;
  CHECK_THROWS_AS(validate_instance(no_card), ValidationError);

  Instance bad_w = base;
  bad_w.weight_capacity = 0.0;
  CHECK_THROWS_AS(validate_instance(bad_w), ValidationError);

  Instance nonpositive = base;
  nonpositive.items[2].components[0].utility = 0.0;
  CHECK_THROWS_AS(validate_instance(nonpositive), ValidationError);

  Instance no_components = base;
  no_components.items[2].components.clear();
  CHECK_THROWS_AS(validate_instance(no_components), ValidationError);
}

TEST_CASE("validate_instance names the offending component", "[model]") {
  Instance inst = fixture_e1();
  inst.items[1].components = {{1, 1}, {1, 2}};
  try {
    validate_instance(inst);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("B") != std::string::npos);
    CHECK(msg.find("1") != std::string::npos);
  }
}

TEST_CASE("items wider than W are truncated at constant density", "[model]") {
  Instance inst{"t", 3.0, 1, {item_a()}};
  const auto v = validate_instance(inst);
  REQUIRE(v.instance.items[0].components.size() == 2);
  CHECK(v.instance.items[0].components[1].weight == Approx(1.0));
  CHECK(v.instance.items[0].components[1].utility == Approx(1.0));
  CHECK(v.warnings.size() == 1);
}

TEST_CASE("objective reports value and feasibility", "[model]") {
  const Instance e1 = fixture_e1();
  Solution s;
  s.utilization = {{"A", 3.0}, {"C", 1.0}};
  const auto stats = objective(e1, s);
  CHECK(stats.objective == Approx(12.0));
  CHECK(stats.weight_used == Approx(4.0));
  CHECK(stats.cardinality_used == 2);
  CHECK(stats.feasible());

  const auto empty = objective(e1, Solution{});
  CHECK(empty.objective == 0.0);
  CHECK(empty.weight_used == 0.0);
  CHECK(empty.cardinality_used == 0);

  Solution all;
  all.utilization = {{"A", 4.0}, {"B", 3.0}, {"C", 1.0}};
  const auto over = objective(e1, all);
  CHECK(over.weight_used == Approx(8.0));
  CHECK_FALSE(over.within_weight);
  CHECK_FALSE(over.within_cardinality);
  CHECK_FALSE(over.feasible());

  Solution unknown;
  unknown.utilization = {{"Z", 1.0}};
  CHECK_THROWS_AS(objective(e1, unknown), InputError);
}

TEST_CASE("canonicalize fills components sequentially", "[model]") {
  const Instance e1 = fixture_e1();
  Solution s;
  s.utilization = {{"A", 3.0}};
  auto c = canonicalize(e1, s);
  REQUIRE(c.per_component);
  CHECK(c.per_component->at({"A", 0}) == Approx(2.0));
  CHECK(c.per_component->at({"A", 1}) == Approx(1.0));
  CHECK(objective(e1, c).partial_component_count == 1);

  s.utilization = {{"A", 2.0}};
  c = canonicalize(e1, s);
  CHECK(c.per_component->at({"A", 0}) == Approx(2.0));
  CHECK(c.per_component->at({"A", 1}) == 0.0);
  CHECK(objective(e1, c).partial_component_count == 0);

  s.utilization = {{"A", 3.0}, {"C", 0.5}};
  CHECK(objective(e1, canonicalize(e1, s)).partial_component_count == 2);
}

TEST_CASE("ranks_above breaks equal totals by id", "[model]") {
  const Item a{"a", {{1, 5}}};
  const Item b{"b", {{2, 5}}};
  const Item c{"c", {{1, 6}}};
  CHECK(ranks_above(a, b));
  CHECK_FALSE(ranks_above(b, a));
  CHECK(ranks_above(c, a));
  CHECK_FALSE(ranks_above(a, a));
  const Instance inst{"r", 10, 1, {b, a, c}};
  CHECK(inst.items[top_item(inst)].id == "c");
}
