#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cckp/acceptance.hpp"
#include "cckp/errors.hpp"
#include "cckp/exact.hpp"
#include "cckp/fptas.hpp"
#include "cckp/gen.hpp"
#include "cckp/greedy.hpp"
#include "cckp/harness.hpp"
#include "cckp/io.hpp"
#include "cckp/online.hpp"
#include "cckp/relax.hpp"

using nlohmann::json;

namespace {

cckp::ValidatedInstance load(const std::string& path) {
  auto v = cckp::validate_instance(cckp::load_instance(path));
  for (const auto& w : v.warnings) std::cerr << "warning: " << w << "\n";
  return v;
}

json solution_report(const cckp::Instance& inst, const cckp::Solution& sol) {
  const auto canon = cckp::canonicalize(inst, sol);
  return {{"solution", cckp::to_json(canon, inst.name)},
          {"stats", cckp::to_json(cckp::objective(inst, canon))}};
}

json trace_json(const cckp::OnlineTrace& trace) {
  json steps = json::array();
  for (const auto& s : trace.steps) {
    json step{{"phase", cckp::phase_name(s.phase)},
              {"item", s.item},
              {"taken", s.taken},
              {"residual_weight", s.residual_weight},
              {"residual_cardinality", s.residual_cardinality}};
    step["suggested"] = s.suggested ? json(*s.suggested) : json(nullptr);
    if (s.forced_tail) step["forced_tail"] = true;
    steps.push_back(std::move(step));
  }
  return {{"sampling_end", trace.sampling_end},
          {"secretary_end", trace.secretary_end},
          {"steps", steps}};
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> ids;
  std::stringstream in(text);
  std::string id;
  while (std::getline(in, id, ',')) {
    if (!id.empty()) ids.push_back(id);
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cckp: cardinality-constrained continuous knapsack solvers and benchmarks"};
  app.require_subcommand(1);

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance offline");
  std::string algo = "greedy";
  std::string solve_path;
  double eps = 0.1;
  double scale = 1.0;
  bool no_early_stop = false;
  std::string solve_out;
  solve->add_option("--algo", algo, "greedy, fptas, exact-bnb, exact-enum, dp-exact or relaxed")
      ->check(CLI::IsMember({"greedy", "fptas", "exact", "exact-bnb", "exact-enum", "dp-exact",
                             "relaxed"}));
  solve->add_option("--eps", eps, "FPTAS accuracy in (0,1)");
  solve->add_option("--scale", scale, "utility scale for dp-exact");
  solve->add_flag("--no-early-stop", no_early_stop, "greedy: always run C rounds");
  solve->add_option("-o,--out", solve_out, "also write the solution JSON here");
  solve->add_option("instance", solve_path, "instance JSON")->required();

  // online
  auto* online = app.add_subcommand("online", "Run the online algorithm on one arrival order");
  std::string online_path;
  std::string solver_name = "greedy";
  double online_eps = 0.1;
  std::string preset;
  std::optional<double> pc, pd, pbeta;
  std::string perm;
  std::uint64_t seed = 1;
  std::string trace_out;
  bool greedy_tail = false;
  online->add_option("--instance", online_path, "instance JSON")->required();
  online->add_option("--solver", solver_name, "offline sub-solver")
      ->check(CLI::IsMember({"exact", "greedy", "fptas"}));
  online->add_option("--eps", online_eps, "FPTAS accuracy for --solver fptas");
  auto* preset_opt =
      online->add_option("--preset", preset, "parameter preset")->check(CLI::IsMember({"auto"}));
  auto* c_opt = online->add_option("--c", pc, "end of the sampling phase (fraction of n)");
  auto* d_opt = online->add_option("--d", pd, "end of the secretary phase (fraction of n)");
  auto* b_opt = online->add_option("--beta", pbeta, "knapsack-phase scaling in (0,1)");
  preset_opt->excludes(c_opt)->excludes(d_opt)->excludes(b_opt);
  c_opt->needs(d_opt)->needs(b_opt);
  d_opt->needs(c_opt);
  b_opt->needs(c_opt);
  auto* perm_opt = online->add_option("--perm", perm, "comma-separated arrival order");
  auto* seed_opt = online->add_option("--seed", seed, "seed of a uniformly random arrival");
  perm_opt->excludes(seed_opt);
  online->add_flag("--greedy-tail", greedy_tail, "fill the last arrival with what remains");
  online->add_option("--trace", trace_out, "write the per-step trace JSON here");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a benchmark instance");
  std::string dataset = "A";
  int gen_n = 10;
  std::string card = "2";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--dataset", dataset, "A or B")->check(CLI::IsMember({"A", "B", "a", "b"}));
  gen->add_option("--n", gen_n, "number of items")->check(CLI::PositiveNumber);
  gen->add_option("--card", card, "2, <pct>% or an explicit C");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--out", gen_out, "output file (default: standard output)");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment described by a config file");
  std::string config_path;
  std::string report_path;
  bench->add_option("--config", config_path, "experiment config JSON")->required();
  bench->add_option("-o,--out", report_path, "report CSV")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  std::string work_dir;
  std::vector<int> only;
  std::uint64_t master_seed = 1;
  verify->add_option("--work-dir", work_dir, "directory for determinism reports");
  verify->add_option("--only", only, "criterion ids to run")->delimiter(',');
  verify->add_option("--seed", master_seed, "master seed");

  // bound
  auto* bound = app.add_subcommand("bound", "Evaluate the competitive-bound objective");
  double bc = 0.695, bd = 0.695, bb = 0.56;
  std::optional<int> bC;
  std::string variant = "general";
  bound->add_option("--c", bc);
  bound->add_option("--d", bd);
  bound->add_option("--beta", bb);
  bound->add_option("--C", bC, "cardinality (omit for infinity)");
  bound->add_option("--variant", variant)->check(CLI::IsMember({"general", "large_C"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      const auto v = load(solve_path);
      const auto& inst = v.instance;
      json out;
      if (algo == "greedy") {
        const auto res = cckp::greedy_cardinality(inst, {.early_stop = !no_early_stop});
        out = solution_report(inst, res.solution);
        json steps = json::array();
        for (const auto& s : res.trace.steps) {
          steps.push_back({{"item", s.item}, {"value", s.value}, {"gain", s.gain}});
        }
        out["trace"] = steps;
      } else if (algo == "fptas") {
        out = solution_report(inst, cckp::fptas_solve(inst, eps));
      } else if (algo == "exact" || algo == "exact-bnb") {
        cckp::BnbStats stats;
        out = solution_report(inst, cckp::exact_bnb(inst, {}, &stats));
        out["search"] = {{"nodes", stats.nodes}, {"pruned", stats.pruned}, {"leaves", stats.leaves}};
      } else if (algo == "exact-enum") {
        out = solution_report(inst, cckp::exact_enumerate(inst));
      } else if (algo == "dp-exact") {
        out = solution_report(inst, cckp::dp_exact_small(inst, scale));
      } else {
        out = solution_report(inst, cckp::solve_relaxed(inst, cckp::SubsetRef::all(inst)));
      }
      out["algorithm"] = algo;
      if (!solve_out.empty()) cckp::save_json(out["solution"], solve_out);
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*online) {
      const auto v = load(online_path);
      const auto& inst = v.instance;
      cckp::OnlineParams params;
      if (pc) {
        params = {*pc, *pd, *pbeta, std::nullopt};
      } else {
        params = cckp::preset_params(inst.cardinality, static_cast<int>(inst.size()));
      }
      const auto solver = cckp::OfflineSolver::parse(solver_name, online_eps);
      const auto arrival = perm.empty() ? cckp::sample_permutation(inst, seed) : split_ids(perm);
      const auto res = cckp::run_online(inst, arrival, params, solver, {.greedy_tail = greedy_tail});
      json out = solution_report(inst, res.solution);
      out["solver"] = solver.name();
      out["params"] = {{"c", params.c}, {"d", params.d}, {"beta", params.beta}};
      if (params.preset) out["params"]["preset"] = *params.preset;
      out["arrival"] = arrival;
      if (!trace_out.empty()) cckp::save_json(trace_json(res.trace), trace_out);
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*gen) {
      const cckp::GenConfig cfg{cckp::parse_dataset(dataset), gen_n,
                                cckp::CardinalityRule::parse(card), gen_seed};
      const auto inst = cckp::generate(cfg);
      if (gen_out.empty()) {
        std::cout << cckp::to_json(inst).dump(2) << "\n";
      } else {
        cckp::save_instance(inst, gen_out);
      }
      return 0;
    }

    if (*bench) {
      const std::filesystem::path cfg_path = config_path;
      const auto cfg = cckp::config_from_json(cckp::load_json(cfg_path), cfg_path.parent_path());
      cckp::OnlineTally tally;
      const auto rows = cfg.mode == cckp::ExperimentMode::Online
                            ? cckp::run_online_experiment(cfg, &tally)
                            : cckp::run_offline_experiment(cfg);
      cckp::write_report(report_path, cfg, rows);
      std::cerr << rows.size() << " rows written to " << report_path << "\n";
      if (tally.violations > 0) {
        std::cerr << tally.violations << " online runs violated feasibility\n";
        return 1;
      }
      return 0;
    }

    if (*verify) {
      cckp::AcceptanceOptions options;
      options.master_seed = master_seed;
      options.work_dir = work_dir;
      options.only = only;
      const auto results = cckp::run_acceptance(options, std::cout);
      int failed = 0;
      for (const auto& r : results) failed += r.passed ? 0 : 1;
      std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
      return failed == 0 ? 0 : 1;
    }

    if (*bound) {
      const auto kind = variant == "general" ? cckp::BoundVariant::General
                                             : cckp::BoundVariant::LargeC;
      const double value = cckp::bound_objective(bc, bd, bb, bC, kind);
      std::cout << json{{"value", value}, {"reciprocal", 1.0 / value}}.dump() << "\n";
      return 0;
    }
  } catch (const cckp::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
