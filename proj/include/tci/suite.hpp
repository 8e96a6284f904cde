#pragma once

// The acceptance suite: twelve numbered criteria, each a deterministic
// function of the master seed producing a verdict, a one-line summary and
// a CSV table.

#include <functional>
#include <string>
#include <vector>

#include "tci/corpus.hpp"
#include "tci/report.hpp"

namespace tci {

inline constexpr int kCriterionCount = 12;

struct SuiteConfig {
  Seed seed = kDefaultSeed;
  double tolerance_scale = 1.0;  // multiplies every stated tolerance
  unsigned workers = 0;
  std::vector<int> criteria;     // empty: all twelve
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  CsvTable table;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // stated runtime bound, part of the verdict
};

const std::string& criterion_name(int id);

/// Criteria 1 to 11. Throws InvalidArgument for other ids.
CriterionResult run_criterion(int id, const SuiteConfig& config);

/// Runs the selected criteria in order. Criterion 12 reruns every selected
/// criterion among 1-11 (all of them if none is selected) and compares the
/// CSV bodies byte for byte. `on_result` is called as each verdict lands.
std::vector<CriterionResult> run_suite(const SuiteConfig& config,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 3 wasserstein-1d: ... (0.1 s)"
std::string format_line(const CriterionResult& result);

}  // namespace tci
