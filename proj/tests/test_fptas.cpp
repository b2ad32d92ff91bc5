#include <catch_amalgamated.hpp>

#include <random>

#include "cckp/errors.hpp"
#include "cckp/fptas.hpp"
#include "cckp/gen.hpp"
#include "cckp/io.hpp"
#include "oracles.hpp"

using namespace cckp;
using Catch::Approx;

TEST_CASE("fptas on the small fixture", "[fptas]") {
  const Instance e1 = fixture_e1();
  CHECK(objective(e1, fptas_solve(e1, 0.25)).objective == 12.0);
  CHECK(objective(e1, fptas_solve(e1, 0.9)).objective >= 1.2);

  const Instance single{"single", 4.0, 1, {{"A", {{2, 6}, {2, 2}}}}};
  for (double eps : {0.05, 0.3, 0.7}) {
    CHECK(objective(single, fptas_solve(single, eps)).objective == Approx(8.0));
  }
}

TEST_CASE("fptas rejects epsilon outside (0,1)", "[fptas]") {
  const Instance e1 = fixture_e1();
  CHECK_THROWS_AS(fptas_solve(e1, 0.0), DomainError);
  CHECK_THROWS_AS(fptas_solve(e1, 1.0), DomainError);
  CHECK_THROWS_AS(fptas_solve(e1, -0.1), DomainError);
}

TEST_CASE("fptas respects the state budget", "[fptas]") {
  const Instance inst = gen_dataset_a({Dataset::A, 60, CardinalityRule::percent(30), 3});
  CHECK_THROWS_AS(fptas_solve(inst, 0.001, {.state_budget = 1e5}), ResourceError);
}

TEST_CASE("dp table entries are feasible minimum weights", "[fptas]") {
  const Instance e1 = fixture_e1();
  // Designate A (index 0); elements come from B and C.
  const double step = 1.0;
  const auto elems = build_elements(e1, 0, step);
  REQUIRE(elems.size() == 2);
  const auto grid = make_grid(e1, 0, step);
  const auto table = build_dp_table(e1, elems, grid);
  CHECK(table.sentinel() == Approx(e1.weight_capacity + 1.0));
  CHECK(table.at(0, 0, 0) == 0.0);
  for (std::size_t i = 0; i < table.elements(); ++i) {
    for (std::size_t l = 0; l <= table.cardinality(); ++l) {
      for (std::size_t v = 0; v < table.levels(); ++v) {
        const double w = table.at(i, l, v);
        CHECK((w <= e1.weight_capacity + 1e-9 || w == table.sentinel()));
      }
    }
  }
}

TEST_CASE("grid levels round element values down", "[fptas]") {
  const Instance inst = gen_dataset_a({Dataset::A, 8, CardinalityRule::fixed2(), 4});
  const double step = 0.7;
  for (const auto& e : build_elements(inst, 0, step)) {
    CHECK(static_cast<double>(e.level) * step <= e.value + 1e-9);
    CHECK(static_cast<double>(e.level + 1) * step > e.value - 1e-9);
    CHECK(e.item != 0);
  }
}

TEST_CASE("fptas meets 1 - eps against brute force", "[fptas][prop]") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 80; ++trial) {
    const Instance inst = oracle::random_instance(rng, 8, 3);
    const double opt = oracle::brute_force_optimum(inst);
    for (double eps : {0.5, 0.2, 0.05}) {
      const auto stats = objective(inst, fptas_solve(inst, eps));
      CHECK(stats.feasible());
      CHECK(stats.objective >= (1.0 - eps) * opt - 1e-6);
      CHECK(stats.objective <= opt + 1e-9);
    }
  }
}

TEST_CASE("dp_exact_small on integral instances", "[fptas]") {
  Instance e1 = fixture_e1();
  CHECK(objective(e1, dp_exact_small(e1)).objective == Approx(12.0));
  e1.cardinality = 1;
  CHECK(objective(e1, dp_exact_small(e1)).objective == Approx(8.0));
  e1.cardinality = 3;
  CHECK(objective(e1, dp_exact_small(e1)).objective == Approx(13.0));
}

TEST_CASE("dp_exact_small matches brute force on integral instances", "[fptas][prop]") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    SmallRandomConfig cfg;
    cfg.integral = true;
    cfg.max_n = 8;
    const Instance inst = validate_instance(gen_small_random(cfg, seed)).instance;
    bool integral = true;
    for (const auto& it : inst.items) {
      for (const auto& c : it.components) integral = integral && c.utility == std::round(c.utility);
    }
    if (!integral) {
      CHECK_THROWS_AS(dp_exact_small(inst), DomainError);
      continue;
    }
    ++checked;
    CHECK(objective(inst, dp_exact_small(inst)).objective ==
          Approx(oracle::brute_force_optimum(inst)).margin(1e-6));
  }
  CHECK(checked > 30);
}

TEST_CASE("dp_exact_small scales half-integral utilities", "[fptas]") {
  const Instance inst{"half", 3.0, 2, {{"a", {{1, 2.5}}}, {"b", {{2, 3.5}}}, {"c", {{1, 1.5}}}}};
  CHECK(objective(inst, dp_exact_small(inst, 2.0)).objective == Approx(6.0));
  CHECK_THROWS_AS(dp_exact_small(inst, 1.0), DomainError);
  CHECK_THROWS_AS(dp_exact_small(inst, 0.0), DomainError);
}
