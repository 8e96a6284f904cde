#pragma once

// Plain-text artifacts: CSV tables with fixed column order and %.12g
// numbers, JSON report envelopes, stable content hashes.

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tci/core.hpp"

namespace tci {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

/// printf("%.12g"); "inf", "-inf", "nan" for non-finite values.
std::string format_number(double x);

/// 64-bit FNV-1a as 16 hex digits.
std::string hash_hex(const std::string& bytes);

using Cell = std::variant<double, std::int64_t, std::string>;

class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  /// Throws InvalidArgument when the row width differs from the header.
  void add_row(std::vector<Cell> row);

  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t rows() const { return rows_.size(); }
  const std::vector<Cell>& row(std::size_t i) const { return rows_[i]; }

  /// Header plus rows, '\n' line endings; strings are quoted only when they
  /// contain a comma, quote or newline.
  std::string body() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

/// Version string of every module, embedded in each report.
Json module_versions();

/// What a command produces: one JSON document and any number of named CSV
/// tables, all stamped with the manifest hash and master seed.
struct Report {
  std::string command;
  Json manifest;
  std::string manifest_hash;
  Seed seed = 0;
  Json summary = Json::object();
  Json records = Json::array();
  std::vector<std::pair<std::string, CsvTable>> tables;
  Json timing = Json::object();  // wall-clock seconds; JSON only, never in CSV
};

/// "# key=value" preamble (hash, seed, version) followed by the table body.
std::string csv_document(const Report& report, const CsvTable& table);
Json json_document(const Report& report);

/// Writes <out>/<command>.json and <out>/<command>[_<table>].csv; returns
/// the paths written.
std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& out_dir);

}  // namespace tci
