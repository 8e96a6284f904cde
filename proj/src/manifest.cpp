#include "tci/manifest.hpp"

#include <algorithm>

namespace tci {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "ot",          "wasserstein",         "isotropy",   "tci-bound",     "tlsi-verify",
      "dirichlet-sharpness", "brenier-1d", "concentration", "lemma1-audit", "suite"};
  return names;
}

Json ExperimentManifest::to_json() const {
  Json j;
  j["version"] = version;
  j["command"] = command;
  j["seed"] = seed;
  j["options"] = {{"oracle", oracle}, {"tolerance_scale", tolerance_scale}};
  j["params"] = params;
  return j;
}

std::string ExperimentManifest::hash() const { return hash_hex(to_json().dump()); }

ExperimentManifest manifest_from_json(const Json& j) {
  if (j.is_null() || (j.is_object() && j.empty())) throw SchemaError("", "manifest is empty");
  JsonReader r(j, "");
  ExperimentManifest m;
  const auto version = r.integer("version");
  if (version != kManifestVersion)
    r.fail("version", "unsupported manifest version " + std::to_string(version) + " (expected " +
                          std::to_string(kManifestVersion) + ")");
  m.command = r.string("command");
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), m.command) == names.end())
    r.fail("command", "unknown command '" + m.command + "'");
  m.seed = r.u64("seed", m.seed);
  if (r.has("options")) {
    JsonReader o = r.object("options");
    m.oracle = o.boolean("oracle", false);
    m.tolerance_scale = o.number("tolerance_scale", 1.0);
    if (m.tolerance_scale < 0.0) o.fail("tolerance_scale", "must be >= 0");
    o.finish();
  }
  if (r.has("params")) {
    m.params = r.raw("params");
    if (!m.params.is_object()) r.fail("params", "expected an object");
  }
  r.finish();
  validate_manifest(m);
  return m;
}

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Line of the last key in a dotted field path, when that key occurs exactly
// once in the text.
int locate(const std::string& text, const std::string& field) {
  if (field.empty()) return 0;
  std::string key = field.substr(field.find_last_of('.') == std::string::npos ? 0 : field.find_last_of('.') + 1);
  key = key.substr(0, key.find('['));
  const std::string needle = "\"" + key + "\"";
  const auto first = text.find(needle);
  if (first == std::string::npos || text.find(needle, first + 1) != std::string::npos) return 0;
  return line_of_offset(text, first);
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) throw SchemaError("", "manifest is empty");
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    SchemaError err("", std::string("invalid JSON: ") + e.what());
    err.set_line(line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1));
    throw err;
  }
  try {
    return manifest_from_json(j);
  } catch (SchemaError& e) {
    if (e.line() == 0) e.set_line(locate(text, e.field()));
    throw;
  }
}

std::string describe(const SchemaError& error) {
  std::string out = error.line() > 0 ? "line " + std::to_string(error.line()) + ": " : "";
  return out + error.what();
}

}  // namespace tci
