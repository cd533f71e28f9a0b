#pragma once

#include <string>
#include <vector>

namespace ahm::verify {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string details;
  double wall_seconds = 0.0;
};

struct Options {
  std::string scratch_dir = "acceptance-out";
  int threads = 1;
};

/// Runs one acceptance criterion (1..9) against its independent oracle
/// and returns the measured outcome.
CriterionResult run_criterion(int id, const Options& options = {});

const std::vector<int>& all_criteria();

}  // namespace ahm::verify
