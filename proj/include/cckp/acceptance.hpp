#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace cckp {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::uint64_t master_seed = 1;
  // Reports for the determinism check are written here.
  std::filesystem::path work_dir;
  // Criterion ids to run; empty runs all of them.
  std::vector<int> only;
};

// Runs the acceptance criteria in order, printing one line per criterion
// to `out` as soon as it finishes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options, std::ostream& out);

std::string format_result(const CriterionResult& r);

}  // namespace cckp
