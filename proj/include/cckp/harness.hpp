#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cckp/exact.hpp"
#include "cckp/gen.hpp"
#include "cckp/model.hpp"
#include "cckp/online.hpp"

namespace cckp {

// Generated instances: for every n, rule and s in [0, seeds) the instance
// seed is derive_seed(master_seed, n, s). Seeds do not depend on the rule,
// so the same items are reused across cardinality rules.
struct SweepSource {
  Dataset dataset = Dataset::A;
  std::vector<int> sizes;
  std::vector<CardinalityRule> rules;
  int seeds = 10;
};

struct SourcedInstance {
  Instance instance;
  std::string dataset = "file";
  std::string card_rule;
  std::optional<std::uint64_t> seed;
};

enum class ExperimentMode { Offline, Online };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::Offline;
  std::vector<std::filesystem::path> files;
  std::optional<SweepSource> sweep;
  std::vector<Instance> instances;

  // Offline: "greedy", "exact", "enumerate", "relaxed", "fptas:<eps>".
  // Online: sub-solvers "exact", "greedy", "fptas:<eps>".
  std::vector<std::string> algorithms{"greedy"};

  // Online only. Empty params means preset_params per instance.
  std::optional<OnlineParams> params;
  int permutations = 20;
  std::vector<std::vector<std::string>> forced_permutations;
  bool greedy_tail = false;

  std::uint64_t master_seed = 1;
  bool record_runtime = false;
  ExactOptions budgets;

  void validate() const;
};

struct ReportRow {
  std::string instance;
  std::string dataset;
  int n = 0;
  int cardinality = 0;
  std::string card_rule;
  std::string algorithm;
  std::string params;
  std::string kind = "run";  // "run" or "aggregate"
  double objective = 0.0;
  double optimum = 0.0;
  std::optional<double> ratio;
  std::optional<double> std_error;
  std::optional<int> zero_count;
  std::optional<double> runtime_ms;
  std::optional<std::uint64_t> seed;
  std::optional<int> perm;
  std::string error;
};

struct OnlineTally {
  std::uint64_t executions = 0;
  std::uint64_t violations = 0;
  std::vector<std::string> messages;  // first few violations
};

// Instances in deterministic order: files, sweep, inline.
std::vector<SourcedInstance> collect_instances(const ExperimentConfig& cfg);

std::vector<ReportRow> run_offline_experiment(const ExperimentConfig& cfg);
std::vector<ReportRow> run_online_experiment(const ExperimentConfig& cfg,
                                             OnlineTally* tally = nullptr);

// Permutation k of an instance: ids shuffled with
// derive_seed(master, fnv1a(instance name), k).
std::uint64_t permutation_seed(std::uint64_t master, const std::string& instance, int k);
std::vector<std::string> sample_permutation(const Instance& inst, std::uint64_t seed);

// Feasibility audit of one online run: weight, cardinality, item capacity,
// at most one full secretary take and the beta cap in the knapsack phase.
std::vector<std::string> audit_online(const Instance& inst, const OnlineParams& params,
                                      const OnlineResult& result);

struct EventRates {
  double xi_rate = 0.0;
  double secretary_top_pick_rate = 0.0;
};

// Trial t uses the permutation seeded by derive_seed(seed, t).
EventRates estimate_event_probabilities(const Instance& inst, const OnlineParams& params,
                                        int trials, std::uint64_t seed);

struct SummaryRow {
  std::string algorithm;
  std::string dataset;
  int n = 0;
  std::string card_rule;
  int count = 0;
  double mean = 0.0;
  double ci_low = 0.0;   // 90% normal interval
  double ci_high = 0.0;
  double min = 0.0;
};

// Groups "run" rows with a ratio by (algorithm, dataset, n, card_rule).
std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows);

std::string report_csv(const std::vector<ReportRow>& rows);
std::string summary_csv(const std::vector<SummaryRow>& rows);

ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base = {});
nlohmann::json to_json(const ExperimentConfig& cfg);

// Writes <path>, <stem>.summary.csv and <stem>.config.json next to it.
void write_report(const std::filesystem::path& path, const ExperimentConfig& cfg,
                  const std::vector<ReportRow>& rows);

}  // namespace cckp
