#include <catch_amalgamated.hpp>

#include <random>

#include "cckp/errors.hpp"
#include "cckp/exact.hpp"
#include "cckp/gen.hpp"
#include "cckp/io.hpp"
#include "cckp/relax.hpp"
#include "oracles.hpp"

using namespace cckp;
using Catch::Approx;

TEST_CASE("exact solvers on the small fixture", "[exact]") {
  Instance e1 = fixture_e1();
  const Solution sol = exact_enumerate(e1);
  CHECK(objective(e1, sol).objective == Approx(12.0));
  CHECK(sol.utilization.count("A") == 1);
  CHECK(sol.utilization.count("C") == 1);
  CHECK(objective(e1, exact_bnb(e1)).objective == Approx(12.0));

  e1.cardinality = 3;
  CHECK(objective(e1, exact_enumerate(e1)).objective == Approx(13.0));
  CHECK(objective(e1, exact_bnb(e1)).objective == Approx(13.0));
  e1.cardinality = 1;
  CHECK(objective(e1, exact_enumerate(e1)).objective == Approx(8.0));
  CHECK(objective(e1, exact_bnb(e1)).objective == Approx(8.0));
}

TEST_CASE("subset counts", "[exact]") {
  CHECK(count_subsets(3, 2) == 6);
  CHECK(count_subsets(5, 5) == 31);
  CHECK(count_subsets(20, 0) == 0);
  CHECK(count_subsets(40, 3) == 40 + 780 + 9880);
}

TEST_CASE("branch and bound matches enumeration on a generated instance", "[exact]") {
  const Instance inst = gen_dataset_a({Dataset::A, 20, CardinalityRule::explicit_c(6), 1});
  const double enumerated = objective(inst, exact_enumerate(inst)).objective;
  BnbStats stats;
  const double bnb = objective(inst, exact_bnb(inst, {}, &stats)).objective;
  CHECK(bnb == Approx(enumerated).margin(1e-9));
  CHECK(stats.nodes > 0);
}

TEST_CASE("vacuous cardinality gives the relaxed value", "[exact]") {
  const Instance inst = gen_dataset_a({Dataset::A, 9, CardinalityRule::explicit_c(12), 2});
  CHECK(objective(inst, exact_bnb(inst)).objective ==
        Approx(g_value(inst, SubsetRef::all(inst))).margin(1e-9));
}

TEST_CASE("budgets raise resource errors", "[exact]") {
  const Instance inst = gen_dataset_a({Dataset::A, 30, CardinalityRule::percent(60), 1});
  CHECK_THROWS_AS(exact_enumerate(inst, {.subset_budget = 1000}), ResourceError);
  CHECK_THROWS_AS(exact_bnb(inst, {.node_budget = 10}), ResourceError);
  CHECK_NOTHROW(exact_bnb(inst));
}

TEST_CASE("exact solvers agree with brute force", "[exact][prop]") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const Instance inst = oracle::random_instance(rng, 10, 4, trial % 7 == 0);
    const double opt = oracle::brute_force_optimum(inst);
    const auto bnb = objective(inst, canonicalize(inst, exact_bnb(inst)));
    CHECK(bnb.objective == Approx(opt).margin(1e-7));
    CHECK(bnb.feasible());
    CHECK(bnb.partial_component_count <= 1);
    CHECK(objective(inst, exact_enumerate(inst)).objective == Approx(opt).margin(1e-7));
  }
}

TEST_CASE("cardinality dual bound is a valid upper bound", "[exact][prop]") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = oracle::random_instance(rng, 9, 3);
    const std::vector<char> none(inst.size(), 0);
    std::vector<std::size_t> open(inst.size());
    for (std::size_t j = 0; j < open.size(); ++j) open[j] = j;
    const double bound = cardinality_dual_bound(inst, none, 0, open);
    CHECK(bound >= oracle::brute_force_optimum(inst) - 1e-7);
  }
}
