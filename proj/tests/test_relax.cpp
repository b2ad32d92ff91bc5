#include <catch_amalgamated.hpp>

#include <random>

#include "cckp/errors.hpp"
#include "cckp/io.hpp"
#include "cckp/relax.hpp"
#include "oracles.hpp"

using namespace cckp;
using Catch::Approx;

namespace {

SubsetRef ids(const Instance& inst, std::vector<std::string> v) {
  return SubsetRef::from_ids(inst, v);
}

}  // namespace

TEST_CASE("relaxed solutions on the small fixture", "[relax]") {
  const Instance e1 = fixture_e1();
  const Solution all = solve_relaxed(e1, SubsetRef::all(e1));
  CHECK(objective(e1, all).objective == Approx(13.0));
  CHECK(all.at("C") == Approx(1.0));
  CHECK(all.at("A") == Approx(2.0));
  CHECK(all.at("B") == Approx(1.0));

  const Solution a = solve_relaxed(e1, ids(e1, {"A"}));
  CHECK(objective(e1, a).objective == Approx(8.0));
  CHECK(a.at("A") == Approx(4.0));

  CHECK(objective(e1, solve_relaxed(e1, ids(e1, {"B", "C"}))).objective == Approx(11.0));
}

TEST_CASE("g_value and marginal_gain on the small fixture", "[relax]") {
  const Instance e1 = fixture_e1();
  CHECK(g_value(e1, ids(e1, {"A", "C"})) == Approx(12.0));
  CHECK(g_value(e1, SubsetRef{}) == 0.0);
  CHECK(g_value(e1, SubsetRef::all(e1)) == Approx(13.0));
  CHECK(marginal_gain(e1, SubsetRef{}, "C") == Approx(5.0));
  CHECK(marginal_gain(e1, ids(e1, {"A"}), "C") == Approx(4.0));
  CHECK(marginal_gain(e1, ids(e1, {"A", "B"}), "C") == Approx(3.0));
  CHECK_THROWS_AS(marginal_gain(e1, ids(e1, {"A"}), "A"), InputError);
}

TEST_CASE("subset references reject bad ids", "[relax]") {
  const Instance e1 = fixture_e1();
  CHECK_THROWS_AS(ids(e1, {"Z"}), InputError);
  CHECK_THROWS_AS(ids(e1, {"A", "A"}), InputError);
  CHECK_THROWS_AS(SubsetRef::from_indices(e1, {7}), InputError);
  const auto s = ids(e1, {"C", "A"});
  CHECK(s.indices() == std::vector<std::size_t>{0, 2});
  CHECK(s.with(1).size() == 3);
  CHECK(s.without(0).indices() == std::vector<std::size_t>{2});
}

TEST_CASE("component ranking is by density, then id, then index", "[relax]") {
  const Instance e1 = fixture_e1();
  const auto r = rank_components(e1, SubsetRef::all(e1));
  REQUIRE(r.size() == 4);
  CHECK(e1.items[r[0].item].id == "C");
  CHECK(e1.items[r[1].item].id == "A");
  CHECK(e1.items[r[2].item].id == "B");
  CHECK(e1.items[r[3].item].id == "A");
  CHECK(r[3].component == 1);
}

TEST_CASE("relaxed value agrees with the LP dual on random subsets", "[relax][prop]") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const Instance inst = oracle::random_instance(rng, 7, 3, trial % 5 == 0);
    const RelaxedEvaluator eval(inst);
    const auto n = static_cast<std::uint32_t>(inst.size());
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      std::vector<char> member(n);
      std::vector<std::size_t> idx;
      for (std::uint32_t j = 0; j < n; ++j) {
        member[j] = mask >> j & 1u;
        if (member[j]) idx.push_back(j);
      }
      const double expected = oracle::relaxed_dual(inst, mask);
      CHECK(eval.value(member) == Approx(expected).margin(1e-9));
      const auto sub = SubsetRef::from_indices(inst, idx);
      const Solution sol = solve_relaxed(inst, sub);
      const auto stats = objective(inst, canonicalize(inst, sol));
      CHECK(stats.objective == Approx(expected).margin(1e-9));
      CHECK(stats.within_weight);
      CHECK(stats.within_item_capacity);
      CHECK(stats.partial_component_count <= 1);
    }
  }
}

TEST_CASE("relaxed value is monotone and submodular", "[relax][prop]") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 60; ++trial) {
    const Instance inst = oracle::random_instance(rng, 6, 2);
    const auto n = static_cast<std::uint32_t>(inst.size());
    std::vector<double> g(1u << n);
    for (std::uint32_t m = 0; m < g.size(); ++m) {
      std::vector<std::size_t> idx;
      for (std::uint32_t j = 0; j < n; ++j) {
        if (m >> j & 1u) idx.push_back(j);
      }
      g[m] = g_value(inst, SubsetRef::from_indices(inst, idx));
    }
    for (std::uint32_t t = 0; t < g.size(); ++t) {
      for (std::uint32_t s = t;; s = (s - 1) & t) {
        CHECK(g[s] <= g[t] + 1e-9);
        for (std::uint32_t j = 0; j < n; ++j) {
          if (t >> j & 1u) continue;
          const std::uint32_t b = 1u << j;
          CHECK(g[s | b] - g[s] >= g[t | b] - g[t] - 1e-9);
        }
        if (s == 0) break;
      }
    }
  }
}
