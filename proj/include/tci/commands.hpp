#pragma once

// Execution of validated manifests: each command runs its module
// operation(s) and assembles a report. Independent instances are spread
// over a worker pool; report rows are always in instance order.

#include <functional>
#include <string>
#include <vector>

#include "tci/manifest.hpp"
#include "tci/report.hpp"

namespace tci {

struct CommandResult {
  Report report;
  /// 0: every check passed; 1: at least one verified inequality failed.
  int exit_code = 0;
  std::vector<std::string> violations;
  /// Free-form lines for the terminal (one per criterion for `suite`).
  std::vector<std::string> messages;
};

/// Runs a manifest (validating it first). Throws SchemaError on invalid
/// parameters; library errors propagate. `progress` receives terminal
/// lines as they become available.
CommandResult run_manifest(const ExperimentManifest& manifest, unsigned workers = 0,
                           const std::function<void(const std::string&)>& progress = {});

}  // namespace tci
