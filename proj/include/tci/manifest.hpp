#pragma once

// Experiment manifests: one versioned JSON schema for every command.
//
//   {"version": 1, "command": "tlsi-verify", "seed": 1729,
//    "options": {"oracle": false, "tolerance_scale": 1.0},
//    "params": {...command specific...}}

#include <string>
#include <vector>

#include "tci/serialization.hpp"

namespace tci {

inline constexpr int kManifestVersion = 1;

/// ot, wasserstein, isotropy, tci-bound, tlsi-verify, dirichlet-sharpness,
/// brenier-1d, concentration, lemma1-audit, suite.
const std::vector<std::string>& command_names();

struct ExperimentManifest {
  int version = kManifestVersion;
  std::string command;
  Seed seed = 1729;
  bool oracle = false;
  double tolerance_scale = 1.0;
  Json params = Json::object();

  /// Canonical form (sorted keys); parse(to_json()) reproduces the manifest.
  Json to_json() const;
  /// hash_hex of the compact canonical dump.
  std::string hash() const;
};

/// Parses and fully validates (including the command's parameters).
/// Throws SchemaError carrying the field path and, where it can be
/// located, the line number in `text`.
ExperimentManifest parse_manifest(const std::string& text);
ExperimentManifest manifest_from_json(const Json& j);

/// Validates the command parameters; throws SchemaError.
void validate_manifest(const ExperimentManifest& manifest);

/// "line 12: params.p: expected a number" style message.
std::string describe(const SchemaError& error);

}  // namespace tci
