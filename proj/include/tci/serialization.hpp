#pragma once

// JSON descriptions of bodies, domains and test functions, read through a
// strict reader that rejects unknown keys and reports the offending field
// path.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "tci/domain.hpp"
#include "tci/report.hpp"
#include "tci/test_function.hpp"

namespace tci {

/// Malformed or semantically invalid manifest content. `field` is a dotted
/// path such as "params.domains[2].radius".
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string field, const std::string& message)
      : std::runtime_error(field.empty() ? message : field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }
  /// 1-based line in the manifest text, 0 when unknown.
  int line() const { return line_; }
  void set_line(int line) { line_ = line; }

 private:
  std::string field_;
  int line_ = 0;
};

/// Typed access to one JSON object. Every key read is marked; `finish()`
/// throws on keys that were never read.
class JsonReader {
 public:
  JsonReader(const Json& object, std::string path);

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const;
  std::string child_path(const std::string& key) const;
  std::string element_path(const std::string& key, std::size_t i) const;

  const Json& raw(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  std::int64_t integer(const std::string& key);
  std::int64_t integer(const std::string& key, std::int64_t fallback);
  std::uint64_t u64(const std::string& key, std::uint64_t fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key);
  std::vector<int> integers(const std::string& key);
  Matrix matrix(const std::string& key);
  JsonReader object(const std::string& key);
  /// Array of objects.
  std::vector<JsonReader> objects(const std::string& key);

  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const Json* json_;
  std::string path_;
  std::set<std::string> seen_;
};

double checked_number(const Json& j, const std::string& path);

ConvexBody body_from_json(JsonReader r);
Json body_to_json(const ConvexBody& body);

Domain domain_from_json(JsonReader r);
Json domain_to_json(const Domain& domain);

TestFunction function_from_json(JsonReader r);
Json function_to_json(const TestFunction& f);

/// A list of functions: either an array of function objects or a family
/// object {"family": "random_trig", "dim", "seed", "count", "positive",
/// "first_index"}. The family expands in index order.
std::vector<TestFunction> functions_from_json(const Json& j, const std::string& path);

}  // namespace tci
