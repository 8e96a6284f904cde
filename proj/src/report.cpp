#include "tci/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace tci {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string hash_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void CsvTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns_.size())
    throw InvalidArgument("CsvTable: row has " + std::to_string(row.size()) + " cells, header has " +
                          std::to_string(columns_.size()));
  rows_.push_back(std::move(row));
}

namespace {

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return quote(std::get<std::string>(c));
}

}  // namespace

std::string CsvTable::body() const {
  std::string out;
  for (std::size_t j = 0; j < columns_.size(); ++j) out += (j ? "," : "") + quote(columns_[j]);
  out += '\n';
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) out += (j ? "," : "") + cell_text(row[j]);
    out += '\n';
  }
  return out;
}

Json module_versions() {
  Json v = Json::object();
  for (const char* m : {"geometry", "sampling", "isotropy", "transport", "functional",
                        "concentration", "cli"})
    v[m] = kVersion;
  return v;
}

std::string csv_document(const Report& report, const CsvTable& table) {
  std::string out = "# command=" + report.command + "\n";
  out += "# manifest_hash=" + report.manifest_hash + "\n";
  out += "# seed=" + std::to_string(report.seed) + "\n";
  out += "# version=" + std::string(kVersion) + "\n";
  std::string modules;
  const Json versions = module_versions();
  for (const auto& [name, v] : versions.items())
    modules += (modules.empty() ? "" : ";") + name + ":" + v.get<std::string>();
  out += "# module_versions=" + modules + "\n";
  return out + table.body();
}

Json json_document(const Report& report) {
  Json doc;
  doc["command"] = report.command;
  doc["manifest"] = report.manifest;
  doc["manifest_hash"] = report.manifest_hash;
  doc["seed"] = report.seed;
  doc["version"] = kVersion;
  doc["versions"] = module_versions();
  doc["summary"] = report.summary;
  doc["records"] = report.records;
  doc["timing"] = report.timing;
  return doc;
}

std::vector<std::filesystem::path> write_report(const Report& report,
                                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << text;
    written.push_back(path);
  };
  put(out_dir / (report.command + ".json"), json_document(report).dump(2) + "\n");
  for (const auto& [name, table] : report.tables) {
    const std::string file = name.empty() ? report.command : report.command + "_" + name;
    put(out_dir / (file + ".csv"), csv_document(report, table));
  }
  return written;
}

}  // namespace tci
