#include <catch_amalgamated.hpp>

#include <set>

#include "cckp/errors.hpp"
#include "cckp/gen.hpp"
#include "cckp/io.hpp"
#include "cckp/rng.hpp"

using namespace cckp;
using Catch::Approx;

TEST_CASE("dataset A items have two concave components in range", "[gen]") {
  for (std::uint64_t seed : {1, 2, 42}) {
    const Instance inst = gen_dataset_a({Dataset::A, 10, CardinalityRule::fixed2(), seed});
    REQUIRE(inst.size() == 10);
    CHECK(inst.cardinality == 2);
    double total = 0.0, largest = 0.0;
    for (const auto& item : inst.items) {
      REQUIRE(item.components.size() == 2);
      CHECK(item.components[0].density() >= item.components[1].density());
      for (const auto& c : item.components) {
        CHECK(c.weight >= 5.0);
        CHECK(c.weight < 20.0);
        CHECK(c.utility >= 10.0);
        CHECK(c.utility < 25.0);
      }
      total += item.capacity();
      largest = std::max(largest, item.capacity());
    }
    CHECK(inst.weight_capacity == Approx(std::max(0.3 * total, 1.0 + largest)));
    CHECK(inst.weight_capacity >= 1.0 + largest);
    CHECK(validate_instance(inst).warnings.empty());
  }
}

TEST_CASE("generation is deterministic per seed", "[gen]") {
  const GenConfig cfg{Dataset::A, 10, CardinalityRule::fixed2(), 42};
  CHECK(to_json(gen_dataset_a(cfg)).dump() == to_json(gen_dataset_a(cfg)).dump());
  const GenConfig other{Dataset::A, 10, CardinalityRule::fixed2(), 43};
  CHECK_FALSE(gen_dataset_a(cfg) == gen_dataset_a(other));
}

TEST_CASE("dataset B appends one dominant item", "[gen]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Instance inst = gen_dataset_b({Dataset::B, 10, CardinalityRule::percent(30), seed});
    const Item& last = inst.items.back();
    const double a1 = last.components[0].weight;
    CHECK(last.total_utility() == Approx(17.0 * a1));
    CHECK(last.capacity() == Approx(inst.weight_capacity));
    CHECK(a1 >= 5.0);
    CHECK(a1 < 0.49 * inst.weight_capacity);
    CHECK(last.components[1].density() > 0.0);
    CHECK(last.components[1].density() <= 7.0 * 0.49 / 0.51 + 1e-9);
  }
}

TEST_CASE("dataset B shares the first draws with dataset A", "[gen]") {
  const Instance a = gen_dataset_a({Dataset::A, 10, CardinalityRule::fixed2(), 7});
  const Instance b = gen_dataset_b({Dataset::B, 10, CardinalityRule::fixed2(), 7});
  for (std::size_t j = 0; j < 9; ++j) CHECK(a.items[j] == b.items[j]);
}

TEST_CASE("dataset B needs room for the last item", "[gen]") {
  CHECK_THROWS_AS(gen_dataset_b({Dataset::B, 1, CardinalityRule::fixed2(), 1}), InputError);
}

TEST_CASE("cardinality rules", "[gen]") {
  CHECK(CardinalityRule::parse("2").resolve(50) == 2);
  CHECK(CardinalityRule::parse("30%").resolve(100) == 30);
  CHECK(CardinalityRule::parse("60%").resolve(10) == 6);
  CHECK(CardinalityRule::parse("30%").resolve(3) == 1);
  CHECK(CardinalityRule::parse("30%").resolve(55) == 16);
  CHECK(CardinalityRule::parse("7").resolve(100) == 7);
  CHECK(CardinalityRule::parse("30%").label() == "30%");
  CHECK_THROWS_AS(CardinalityRule::parse("abc"), InputError);
  CHECK_THROWS_AS(CardinalityRule::parse("0"), InputError);
  CHECK_THROWS_AS(CardinalityRule::parse("-5%"), InputError);
}

TEST_CASE("item ids are zero padded and unique", "[gen]") {
  CHECK(generated_item_id(7, 10) == "j007");
  CHECK(generated_item_id(12, 5000) == "j0012");
  const Instance inst = gen_dataset_a({Dataset::A, 100, CardinalityRule::fixed2(), 1});
  std::set<std::string> ids;
  for (const auto& item : inst.items) ids.insert(item.id);
  CHECK(ids.size() == 100);
}

TEST_CASE("rng helpers", "[gen]") {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  std::vector<int> v{1, 2, 3, 4, 5, 6};
  r.shuffle(v);
  std::sort(v.begin(), v.end());
  CHECK(v == std::vector<int>{1, 2, 3, 4, 5, 6});
}
