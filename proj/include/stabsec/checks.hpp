#pragma once

#include <string>
#include <vector>

namespace stabsec {

struct CheckResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured vs required
  double seconds = 0;
};

inline constexpr int kCriterionCount = 12;

// Runs one acceptance criterion (1-based) with its pinned seeds, tolerances
// and sizes.
CheckResult run_criterion(int index);

// "core-oracles", "rwy-guarantee", "adversarial-exact", "bounds", "all"
std::vector<int> suite_criteria(const std::string& suite);

}  // namespace stabsec
