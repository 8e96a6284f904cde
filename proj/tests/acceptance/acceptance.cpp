// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is the number of failures
// (capped at 1).

#include <cstdlib>
#include <iostream>
#include <string>

#include "tci/corpus.hpp"
#include "tci/suite.hpp"

int main(int argc, char** argv) {
  tci::SuiteConfig cfg;
  cfg.seed = tci::kDefaultSeed;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--seed" && i + 1 < argc) cfg.seed = std::strtoull(argv[++i], nullptr, 10);
    else if (a == "--tolerance-scale" && i + 1 < argc) cfg.tolerance_scale = std::strtod(argv[++i], nullptr);
    else if (a == "--criterion" && i + 1 < argc) cfg.criteria.push_back(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance [--seed N] [--tolerance-scale F] [--criterion K]...\n";
      return 2;
    }
  }
  int failures = 0;
  tci::run_suite(cfg, [&](const tci::CriterionResult& r) {
    std::cout << tci::format_line(r) << std::endl;
    if (!r.pass) ++failures;
  });
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
