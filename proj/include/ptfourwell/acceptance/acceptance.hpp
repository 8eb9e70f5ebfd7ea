#pragma once

// Built-in acceptance suite behind `ptfourwell check`.

#include <iosfwd>
#include <string>
#include <vector>

namespace ptfw::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every criterion, printing one PASS/FAIL line each to `out` as it finishes.
std::vector<CriterionResult> run_suite(std::ostream& out);

/// 0 when every criterion passed, 1 otherwise.
int suite_status(const std::vector<CriterionResult>& results);

}  // namespace ptfw::acceptance
