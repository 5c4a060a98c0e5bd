#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cdk::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Runs the full acceptance suite (analytic matches, oracle integrity,
// convergence-rate checks against the exact kernel, Tracy-Widom and
// deviation cross-checks, special-function identities).
std::vector<CriterionResult> run_all();

// Prints one PASS/FAIL line per criterion; returns the number of failures.
int run_and_report(std::ostream& os);

}  // namespace cdk::acceptance
