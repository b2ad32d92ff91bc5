#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cckp/errors.hpp"
#include "cckp/gen.hpp"
#include "cckp/harness.hpp"
#include "cckp/io.hpp"

using namespace cckp;
using Catch::Approx;

namespace {

ExperimentConfig e1_config(std::vector<std::string> algorithms) {
  ExperimentConfig cfg;
  cfg.instances = {fixture_e1()};
  cfg.algorithms = std::move(algorithms);
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("offline experiment on the small fixture", "[harness]") {
  const auto rows = run_offline_experiment(e1_config({"greedy", "fptas:0.25"}));
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.error.empty());
    CHECK(r.optimum == Approx(12.0));
    CHECK(r.objective == Approx(12.0));
    REQUIRE(r.ratio);
    CHECK(*r.ratio == Approx(1.0));
    CHECK_FALSE(r.runtime_ms);
  }
  CHECK(rows[1].params == "eps=0.25");
}

TEST_CASE("offline experiment with no instances is empty", "[harness]") {
  ExperimentConfig cfg;
  CHECK(run_offline_experiment(cfg).empty());
}

TEST_CASE("optimum budget failures are reported per row", "[harness]") {
  ExperimentConfig cfg;
  cfg.instances = {gen_dataset_a({Dataset::A, 30, CardinalityRule::percent(60), 1})};
  cfg.budgets.node_budget = 10;
  const auto rows = run_offline_experiment(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].error.rfind("budget", 0) == 0);
  CHECK_FALSE(rows[0].ratio);
}

TEST_CASE("online experiment with forced permutations", "[harness]") {
  ExperimentConfig cfg = e1_config({"exact"});
  cfg.mode = ExperimentMode::Online;
  cfg.params = OnlineParams{0.0, 0.0, 0.5, std::nullopt};
  cfg.forced_permutations = {{"C", "A", "B"}, {"A", "C", "B"}};
  OnlineTally tally;
  const auto rows = run_online_experiment(cfg, &tally);
  REQUIRE(rows.size() == 3);
  CHECK(*rows[0].ratio == Approx(7.0 / 12.0));
  CHECK(*rows[1].ratio == Approx(8.5 / 12.0));
  CHECK(rows[2].kind == "aggregate");
  CHECK(*rows[2].ratio == Approx(0.6458).margin(1e-4));
  CHECK(*rows[2].ratio == Approx((*rows[0].ratio + *rows[1].ratio) / 2).margin(1e-12));
  CHECK(*rows[2].zero_count == 0);
  CHECK(tally.executions == 2);
  CHECK(tally.violations == 0);
}

TEST_CASE("sampling-only online experiment scores zero", "[harness]") {
  ExperimentConfig cfg = e1_config({"greedy"});
  cfg.mode = ExperimentMode::Online;
  cfg.params = OnlineParams{1.0, 1.0, 0.5, std::nullopt};
  cfg.permutations = 4;
  const auto rows = run_online_experiment(cfg);
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) CHECK(*r.ratio == 0.0);
  CHECK(*rows.back().zero_count == 4);
}

TEST_CASE("online reports are byte identical across reruns", "[harness]") {
  ExperimentConfig cfg = e1_config({"exact", "greedy"});
  cfg.mode = ExperimentMode::Online;
  cfg.permutations = 2;
  cfg.master_seed = 77;
  const auto a = report_csv(run_online_experiment(cfg));
  const auto b = report_csv(run_online_experiment(cfg));
  CHECK(a == b);
  cfg.master_seed = 78;
  const auto rows = run_online_experiment(cfg);
  CHECK(rows.size() == 6);
}

TEST_CASE("report rows can be recomputed from their fields", "[harness]") {
  ExperimentConfig cfg;
  cfg.sweep = SweepSource{Dataset::A, {10, 20}, {CardinalityRule::fixed2(),
                                                  CardinalityRule::percent(60)}, 2};
  cfg.algorithms = {"greedy", "fptas:0.5", "exact"};
  const auto rows = run_offline_experiment(cfg);
  CHECK(rows.size() == 2 * 2 * 2 * 3);
  for (const auto& r : rows) {
    REQUIRE(r.ratio);
    CHECK(*r.ratio == Approx(r.objective / r.optimum).margin(1e-9));
    CHECK(r.seed.has_value());
  }
  const auto summary = summarize(rows);
  CHECK(summary.size() == 3 * 2 * 2);
  for (const auto& s : summary) {
    CHECK(s.count == 2);
    CHECK(s.ci_low <= s.mean);
    CHECK(s.min <= s.mean + 1e-12);
  }
}

TEST_CASE("event probabilities", "[harness]") {
  const Instance inst = gen_dataset_a({Dataset::A, 100, CardinalityRule::percent(30), 4});
  const auto same = estimate_event_probabilities(inst, {0.4, 0.4, 0.5, std::nullopt}, 200, 3);
  CHECK(same.xi_rate == 1.0);
  CHECK(same.secretary_top_pick_rate == 0.0);
  const auto xi = estimate_event_probabilities(inst, {0.5, 1.0, 0.5, std::nullopt}, 2000, 3);
  CHECK(xi.xi_rate == Approx(0.5).margin(0.04));
  const auto top = estimate_event_probabilities(inst, {0.25, 0.75, 0.5, std::nullopt}, 2000, 4);
  CHECK(top.secretary_top_pick_rate >= 0.25 * std::log(3.0) - 0.05);
  CHECK_THROWS_AS(estimate_event_probabilities(inst, {0.25, 0.75, 0.5, std::nullopt}, 0, 4),
                  DomainError);
}

TEST_CASE("config JSON parsing", "[harness]") {
  const auto cfg = config_from_json(nlohmann::json::parse(R"({
    "mode": "online",
    "sweep": {"dataset": "B", "n": [10, 20], "cardinality": ["2", "30%", 5], "seeds": 3},
    "algorithms": ["greedy", "fptas:0.2"],
    "permutations": 5,
    "master_seed": 9,
    "params": {"c": 0.2, "d": 0.6, "beta": 0.5},
    "greedy_tail": true
  })"));
  CHECK(cfg.mode == ExperimentMode::Online);
  REQUIRE(cfg.sweep);
  CHECK(cfg.sweep->rules.size() == 3);
  CHECK(cfg.sweep->rules[2].resolve(20) == 5);
  CHECK(cfg.permutations == 5);
  CHECK(cfg.params->d == 0.6);
  CHECK(cfg.greedy_tail);

  const auto back = config_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"algorithms": ["simplex"]})")),
                  InputError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"permutations": 0})")), InputError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"colour": 1})")), InputError);
  CHECK_THROWS_AS(
      config_from_json(nlohmann::json::parse(R"({"mode": "online", "algorithms": ["enumerate"]})")),
      InputError);
}

TEST_CASE("write_report emits the csv, summary and config", "[harness]") {
  const auto dir = std::filesystem::temp_directory_path() / "cckp_harness_test";
  std::filesystem::remove_all(dir);
  const auto cfg = e1_config({"greedy"});
  write_report(dir / "r.csv", cfg, run_offline_experiment(cfg));
  const auto csv = slurp(dir / "r.csv");
  CHECK(csv.rfind("instance,dataset,n,C,card_rule,algorithm,params,kind,objective,optimum,ratio,"
                  "std_error,zero_count,runtime_ms,seed,perm,error\n", 0) == 0);
  CHECK(csv.find("e1,inline,3,2,2,greedy,,run,12,12,1,") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "r.summary.csv"));
  CHECK(nlohmann::json::parse(slurp(dir / "r.config.json"))["algorithms"][0] == "greedy");
  std::filesystem::remove_all(dir);
}
