#include "frontwave/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fw {

std::string format_full(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  if (table.header.size() != table.columns.size()) {
    throw IoError("csv header and column counts differ for " + path);
  }
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (const auto& col : table.columns) {
    if (col.size() != rows) throw IoError("csv columns have unequal lengths for " + path);
  }

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    out << (j ? "," : "") << table.header[j];
  }
  out << '\n';
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      out << (j ? "," : "") << format_full(table.columns[j][k]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv file " + path);
  std::istringstream head(line);
  for (std::string cell; std::getline(head, cell, ',');) table.header.push_back(cell);
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::size_t j = 0;
    for (std::string cell; std::getline(row, cell, ','); ++j) {
      if (j >= table.columns.size()) throw IoError("row wider than header in " + path);
      table.columns[j].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (j != table.columns.size()) throw IoError("row narrower than header in " + path);
  }
  return table;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& manifest) {
  nlohmann::json j;
  j["command"] = manifest.command;
  j["version"] = manifest.version;
  j["seed"] = manifest.seed;
  j["threads"] = manifest.threads;
  j["timestamp"] = utc_timestamp();
  // numeric fields go through format_full so the manifest round-trips bits
  auto full = [](const std::map<std::string, double>& m) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [key, v] : m) out[key] = format_full(v);
    return out;
  };
  j["params"] = full(manifest.params);
  j["tolerances"] = full(manifest.tolerances);
  j["options"] = manifest.options;
  j["inputs"] = manifest.inputs;
  j["outputs"] = manifest.outputs;

  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for " + path);
}

}  // namespace fw
