#include "cckp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "cckp/errors.hpp"
#include "cckp/fptas.hpp"
#include "cckp/greedy.hpp"
#include "cckp/io.hpp"
#include "cckp/rng.hpp"

namespace cckp {

namespace {

using Clock = std::chrono::steady_clock;

struct OfflineAlgorithm {
  std::string name;
  std::string params;
  std::optional<double> epsilon;
};

OfflineAlgorithm parse_algorithm(const std::string& text) {
  if (text == "greedy" || text == "exact" || text == "enumerate") return {text, "", {}};
  if (text.rfind("fptas", 0) == 0) {
    double eps = 0.1;
    if (text.size() > 5) {
      if (text[5] != ':') throw InputError("unknown algorithm '" + text + "'");
      try {
        std::size_t used = 0;
        eps = std::stod(text.substr(6), &used);
        if (used != text.size() - 6) throw InputError("");
      } catch (const std::exception&) {
        throw InputError("bad epsilon in '" + text + "'");
      }
    }
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("epsilon must lie in (0,1): " + text);
    char buf[64];
    std::snprintf(buf, sizeof buf, "eps=%.17g", eps);
    return {"fptas", buf, eps};
  }
  throw InputError("unknown algorithm '" + text + "'");
}

OfflineSolver parse_sub_solver(const std::string& text) {
  const auto alg = parse_algorithm(text);
  if (alg.name == "exact") return OfflineSolver::exact();
  if (alg.name == "greedy") return OfflineSolver::greedy();
  if (alg.name == "fptas") return OfflineSolver::fptas(*alg.epsilon);
  throw InputError("'" + text + "' cannot be used as an online sub-solver");
}

Solution run_offline(const OfflineAlgorithm& alg, const Instance& inst,
                     const ExactOptions& budgets) {
  if (alg.name == "greedy") return greedy_cardinality(inst).solution;
  if (alg.name == "exact") return exact_bnb(inst, budgets);
  if (alg.name == "enumerate") return exact_enumerate(inst, budgets);
  return fptas_solve(inst, *alg.epsilon);
}

std::string error_code(const std::exception& e) {
  if (dynamic_cast<const ResourceError*>(&e)) return std::string("budget: ") + e.what();
  return std::string("error: ") + e.what();
}

ReportRow base_row(const SourcedInstance& src) {
  ReportRow row;
  row.instance = src.instance.name;
  row.dataset = src.dataset;
  row.n = static_cast<int>(src.instance.size());
  row.cardinality = src.instance.cardinality;
  row.card_rule = src.card_rule;
  row.seed = src.seed;
  return row;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

void ExperimentConfig::validate() const {
  if (permutations < 1) throw InputError("permutations per instance must be >= 1");
  if (algorithms.empty()) throw InputError("no algorithms configured");
  for (const auto& a : algorithms) {
    if (mode == ExperimentMode::Online) {
      parse_sub_solver(a);
    } else {
      parse_algorithm(a);
    }
  }
  if (params) params->validate();
  if (sweep) {
    if (sweep->seeds < 1) throw InputError("sweep needs at least one seed");
    for (int n : sweep->sizes) {
      if (n < 1) throw InputError("sweep sizes must be positive");
    }
  }
}

std::vector<SourcedInstance> collect_instances(const ExperimentConfig& cfg) {
  std::vector<SourcedInstance> out;
  for (const auto& path : cfg.files) {
    auto v = validate_instance(load_instance(path));
    SourcedInstance src{std::move(v.instance), "file", "", std::nullopt};
    src.card_rule = std::to_string(src.instance.cardinality);
    out.push_back(std::move(src));
  }
  if (cfg.sweep) {
    for (int n : cfg.sweep->sizes) {
      for (const auto& rule : cfg.sweep->rules) {
        for (int s = 0; s < cfg.sweep->seeds; ++s) {
          GenConfig g{cfg.sweep->dataset, n, rule,
                      derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n),
                                  static_cast<std::uint64_t>(s))};
          SourcedInstance src{generate(g), dataset_name(cfg.sweep->dataset), rule.label(),
                              g.seed};
          out.push_back(std::move(src));
        }
      }
    }
  }
  for (const auto& inst : cfg.instances) {
    auto v = validate_instance(inst);
    SourcedInstance src{std::move(v.instance), "inline", "", std::nullopt};
    src.card_rule = std::to_string(src.instance.cardinality);
    out.push_back(std::move(src));
  }
  return out;
}

std::vector<ReportRow> run_offline_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<OfflineAlgorithm> algs;
  for (const auto& a : cfg.algorithms) algs.push_back(parse_algorithm(a));

  std::vector<ReportRow> rows;
  for (const auto& src : collect_instances(cfg)) {
    const Instance& inst = src.instance;
    std::optional<double> optimum;
    std::string opt_error;
    try {
      optimum = objective(inst, exact_bnb(inst, cfg.budgets)).objective;
    } catch (const Error& e) {
      opt_error = error_code(e);
    }
    for (const auto& alg : algs) {
      ReportRow row = base_row(src);
      row.algorithm = alg.name;
      row.params = alg.params;
      try {
        const auto start = Clock::now();
        const Solution sol = run_offline(alg, inst, cfg.budgets);
        if (cfg.record_runtime) row.runtime_ms = elapsed_ms(start);
        const SolutionStats stats = objective(inst, sol);
        row.objective = stats.objective;
        if (!stats.feasible()) row.error = "infeasible";
      } catch (const Error& e) {
        row.error = error_code(e);
      }
      if (optimum) {
        row.optimum = *optimum;
        if (row.error.empty() && *optimum > 0.0) row.ratio = row.objective / *optimum;
      } else if (row.error.empty()) {
        row.error = opt_error;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::uint64_t permutation_seed(std::uint64_t master, const std::string& instance, int k) {
  return derive_seed(master, fnv1a(instance), static_cast<std::uint64_t>(k));
}

std::vector<std::string> sample_permutation(const Instance& inst, std::uint64_t seed) {
  std::vector<std::string> ids;
  ids.reserve(inst.size());
  for (const auto& item : inst.items) ids.push_back(item.id);
  Rng rng(seed);
  rng.shuffle(ids);
  return ids;
}

std::vector<std::string> audit_online(const Instance& inst, const OnlineParams& params,
                                      const OnlineResult& result) {
  std::vector<std::string> issues;
  const SolutionStats stats = objective(inst, result.solution);
  if (!stats.within_weight) issues.push_back("weight capacity exceeded");
  if (!stats.within_cardinality) issues.push_back("cardinality exceeded");
  if (!stats.within_item_capacity) issues.push_back("item capacity exceeded");

  int secretary_takes = 0;
  double residual = inst.weight_capacity;
  for (const auto& step : result.trace.steps) {
    if (step.taken > 0.0) {
      const Item& item = inst.items[inst.index_of(step.item)];
      if (step.phase == Phase::Sampling) issues.push_back("take during sampling: " + step.item);
      if (step.phase == Phase::Secretary) {
        ++secretary_takes;
        if (std::abs(step.taken - std::min(item.capacity(), residual)) > kTolerance) {
          issues.push_back("partial secretary take: " + step.item);
        }
      }
      if (step.phase == Phase::Knapsack && !step.forced_tail) {
        const double cap = step.suggested ? params.beta * *step.suggested : 0.0;
        if (step.taken > cap + kTolerance) issues.push_back("beta cap exceeded: " + step.item);
      }
      if (step.taken > residual + kTolerance) {
        issues.push_back("take above residual capacity: " + step.item);
      }
      residual -= step.taken;
    }
    if (std::abs(step.residual_weight - residual) > 1e-6) {
      issues.push_back("residual bookkeeping mismatch at " + step.item);
    }
  }
  if (secretary_takes > 1) issues.push_back("more than one secretary take");
  return issues;
}

std::vector<ReportRow> run_online_experiment(const ExperimentConfig& cfg, OnlineTally* tally) {
  cfg.validate();
  std::vector<OfflineSolver> solvers;
  for (const auto& a : cfg.algorithms) solvers.push_back(parse_sub_solver(a));

  std::vector<ReportRow> rows;
  for (const auto& src : collect_instances(cfg)) {
    const Instance& inst = src.instance;
    const OnlineParams params =
        cfg.params ? *cfg.params
                   : preset_params(inst.cardinality, static_cast<int>(inst.size()));
    std::optional<double> optimum;
    std::string opt_error;
    try {
      optimum = objective(inst, exact_bnb(inst, cfg.budgets)).objective;
    } catch (const Error& e) {
      opt_error = error_code(e);
    }

    const int k_runs = cfg.forced_permutations.empty()
                           ? cfg.permutations
                           : static_cast<int>(cfg.forced_permutations.size());
    for (const auto& solver : solvers) {
      ReportRow proto = base_row(src);
      proto.algorithm = "online/" + solver.name();
      proto.params = params.describe();
      if (optimum) proto.optimum = *optimum;

      std::vector<double> ratios;
      double objective_sum = 0.0;
      int zeros = 0;
      int ok_runs = 0;
      for (int k = 0; k < k_runs; ++k) {
        ReportRow row = proto;
        row.perm = k;
        std::vector<std::string> order;
        if (cfg.forced_permutations.empty()) {
          row.seed = permutation_seed(cfg.master_seed, inst.name, k);
          order = sample_permutation(inst, *row.seed);
        } else {
          row.seed.reset();
          order = cfg.forced_permutations[static_cast<std::size_t>(k)];
        }
        try {
          const auto start = Clock::now();
          const OnlineResult res =
              run_online(inst, order, params, solver, {.greedy_tail = cfg.greedy_tail});
          if (cfg.record_runtime) row.runtime_ms = elapsed_ms(start);
          row.objective = objective(inst, res.solution).objective;
          const auto issues = audit_online(inst, params, res);
          if (tally) {
            ++tally->executions;
            if (!issues.empty()) {
              ++tally->violations;
              if (tally->messages.size() < 10) {
                tally->messages.push_back(inst.name + " perm " + std::to_string(k) + ": " +
                                          issues.front());
              }
            }
          }
          if (!issues.empty()) row.error = "infeasible: " + issues.front();
        } catch (const Error& e) {
          row.error = error_code(e);
        }
        if (row.error.empty()) {
          if (optimum && *optimum > 0.0) {
            row.ratio = row.objective / *optimum;
            ratios.push_back(*row.ratio);
          } else if (!optimum) {
            row.error = opt_error;
          }
        }
        if (row.error.empty()) {
          ++ok_runs;
          objective_sum += row.objective;
          if (row.objective <= kTolerance) ++zeros;
        }
        rows.push_back(std::move(row));
      }

      ReportRow agg = proto;
      agg.kind = "aggregate";
      agg.seed.reset();
      agg.zero_count = zeros;
      if (ok_runs > 0) agg.objective = objective_sum / ok_runs;
      if (!ratios.empty()) {
        double sum = 0.0;
        for (double r : ratios) sum += r;
        const double mean = sum / static_cast<double>(ratios.size());
        double ss = 0.0;
        for (double r : ratios) ss += (r - mean) * (r - mean);
        agg.ratio = mean;
        agg.std_error = ratios.size() > 1
                            ? std::sqrt(ss / static_cast<double>(ratios.size() - 1)) /
                                  std::sqrt(static_cast<double>(ratios.size()))
                            : 0.0;
      }
      if (ok_runs < k_runs) agg.error = std::to_string(k_runs - ok_runs) + " failed runs";
      rows.push_back(std::move(agg));
    }
  }
  return rows;
}

EventRates estimate_event_probabilities(const Instance& inst, const OnlineParams& params,
                                        int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trials must be >= 1");
  params.validate();
  const std::size_t top = top_item(inst);
  std::vector<std::size_t> order(inst.size());
  int xi = 0;
  int top_picks = 0;
  for (int t = 0; t < trials; ++t) {
    for (std::size_t j = 0; j < order.size(); ++j) order[j] = j;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    rng.shuffle(order);
    const OnlineState st = run_selection_phases(inst, order, params);
    if (st.picked.empty()) {
      ++xi;
    } else if (st.picked.front() == top) {
      ++top_picks;
    }
  }
  return {static_cast<double>(xi) / trials, static_cast<double>(top_picks) / trials};
}

std::vector<SummaryRow> summarize(const std::vector<ReportRow>& rows) {
  using Key = std::tuple<std::string, std::string, int, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : rows) {
    if (r.kind != "run" || !r.ratio) continue;
    groups[{r.algorithm, r.dataset, r.n, r.card_rule}].push_back(*r.ratio);
  }
  std::vector<SummaryRow> out;
  for (const auto& [key, values] : groups) {
    SummaryRow s;
    std::tie(s.algorithm, s.dataset, s.n, s.card_rule) = key;
    s.count = static_cast<int>(values.size());
    double sum = 0.0;
    s.min = values.front();
    for (double v : values) {
      sum += v;
      s.min = std::min(s.min, v);
    }
    s.mean = sum / s.count;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    const double se = s.count > 1 ? std::sqrt(ss / (s.count - 1)) / std::sqrt(s.count) : 0.0;
    s.ci_low = s.mean - 1.6448536269514722 * se;
    s.ci_high = s.mean + 1.6448536269514722 * se;
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + '"';
}

template <typename T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return num(*v);
  } else {
    return std::to_string(*v);
  }
}

}  // namespace

std::string report_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream out;
  out << "instance,dataset,n,C,card_rule,algorithm,params,kind,objective,optimum,ratio,"
         "std_error,zero_count,runtime_ms,seed,perm,error\n";
  for (const auto& r : rows) {
    out << field(r.instance) << ',' << field(r.dataset) << ',' << r.n << ',' << r.cardinality
        << ',' << field(r.card_rule) << ',' << field(r.algorithm) << ',' << field(r.params)
        << ',' << r.kind << ',' << num(r.objective) << ',' << num(r.optimum) << ','
        << opt(r.ratio) << ',' << opt(r.std_error) << ',' << opt(r.zero_count) << ','
        << opt(r.runtime_ms) << ',' << opt(r.seed) << ',' << opt(r.perm) << ','
        << field(r.error) << '\n';
  }
  return out.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "algorithm,dataset,n,card_rule,count,mean,ci90_low,ci90_high,min\n";
  for (const auto& s : rows) {
    out << field(s.algorithm) << ',' << field(s.dataset) << ',' << s.n << ','
        << field(s.card_rule) << ',' << s.count << ',' << num(s.mean) << ',' << num(s.ci_low)
        << ',' << num(s.ci_high) << ',' << num(s.min) << '\n';
  }
  return out.str();
}

ExperimentConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw InputError("experiment config must be a JSON object");
  static const std::vector<std::string> known{
      "mode",        "instances",      "sweep",       "algorithms", "permutations",
      "master_seed", "params",         "greedy_tail", "record_runtime",
      "forced_permutations", "budgets", "inline_instances"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw InputError("unknown config key '" + key + "'");
    }
  }
  ExperimentConfig cfg;
  try {
    const std::string mode = j.value("mode", std::string("offline"));
    if (mode == "offline") {
      cfg.mode = ExperimentMode::Offline;
    } else if (mode == "online") {
      cfg.mode = ExperimentMode::Online;
    } else {
      throw InputError("mode must be 'offline' or 'online'");
    }
    if (j.contains("instances")) {
      for (const auto& p : j.at("instances")) {
        std::filesystem::path path = p.get<std::string>();
        cfg.files.push_back(path.is_relative() && !base.empty() ? base / path : path);
      }
    }
    if (j.contains("inline_instances")) {
      for (const auto& inst : j.at("inline_instances")) {
        cfg.instances.push_back(instance_from_json(inst));
      }
    }
    if (j.contains("sweep")) {
      const auto& s = j.at("sweep");
      SweepSource sweep;
      sweep.dataset = parse_dataset(s.value("dataset", std::string("A")));
      sweep.sizes = s.at("n").get<std::vector<int>>();
      for (const auto& r : s.at("cardinality")) {
        sweep.rules.push_back(
            CardinalityRule::parse(r.is_number() ? std::to_string(r.get<int>())
                                                 : r.get<std::string>()));
      }
      sweep.seeds = s.value("seeds", 10);
      cfg.sweep = sweep;
    }
    if (j.contains("algorithms")) cfg.algorithms = j.at("algorithms").get<std::vector<std::string>>();
    cfg.permutations = j.value("permutations", 20);
    cfg.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("params")) {
      const auto& p = j.at("params");
      if (p.is_string()) {
        if (p.get<std::string>() != "auto") throw InputError("params must be 'auto' or an object");
      } else {
        cfg.params = OnlineParams{p.at("c").get<double>(), p.at("d").get<double>(),
                                  p.at("beta").get<double>(), std::nullopt};
      }
    }
    cfg.greedy_tail = j.value("greedy_tail", false);
    cfg.record_runtime = j.value("record_runtime", false);
    if (j.contains("forced_permutations")) {
      cfg.forced_permutations =
          j.at("forced_permutations").get<std::vector<std::vector<std::string>>>();
    }
    if (j.contains("budgets")) {
      const auto& b = j.at("budgets");
      cfg.budgets.subset_budget = b.value("subsets", cfg.budgets.subset_budget);
      cfg.budgets.node_budget = b.value("nodes", cfg.budgets.node_budget);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed experiment config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["mode"] = cfg.mode == ExperimentMode::Online ? "online" : "offline";
  j["instances"] = nlohmann::json::array();
  for (const auto& p : cfg.files) j["instances"].push_back(p.generic_string());
  if (cfg.sweep) {
    nlohmann::json s;
    s["dataset"] = dataset_name(cfg.sweep->dataset);
    s["n"] = cfg.sweep->sizes;
    s["cardinality"] = nlohmann::json::array();
    for (const auto& r : cfg.sweep->rules) s["cardinality"].push_back(r.label());
    s["seeds"] = cfg.sweep->seeds;
    j["sweep"] = s;
  }
  if (!cfg.instances.empty()) {
    j["inline_instances"] = nlohmann::json::array();
    for (const auto& inst : cfg.instances) j["inline_instances"].push_back(to_json(inst));
  }
  j["algorithms"] = cfg.algorithms;
  j["permutations"] = cfg.permutations;
  j["master_seed"] = cfg.master_seed;
  if (cfg.params) {
    j["params"] = {{"c", cfg.params->c}, {"d", cfg.params->d}, {"beta", cfg.params->beta}};
  } else {
    j["params"] = "auto";
  }
  j["greedy_tail"] = cfg.greedy_tail;
  j["record_runtime"] = cfg.record_runtime;
  if (!cfg.forced_permutations.empty()) j["forced_permutations"] = cfg.forced_permutations;
  j["budgets"] = {{"subsets", cfg.budgets.subset_budget}, {"nodes", cfg.budgets.node_budget}};
  return j;
}

void write_report(const std::filesystem::path& path, const ExperimentConfig& cfg,
                  const std::vector<ReportRow>& rows) {
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw InputError("cannot write " + p.string());
    out << text;
  };
  write(path, report_csv(rows));
  auto stem = path;
  stem.replace_extension();
  write(stem.string() + ".summary.csv", summary_csv(summarize(rows)));
  write(stem.string() + ".config.json", to_json(cfg).dump(2) + "\n");
}

}  // namespace cckp
