#pragma once

// Artifact writers shared by the command-line tools: column-oriented CSV,
// run manifests, and full-precision number formatting.  Doubles are written
// with "%.17g" so a round-trip through text reproduces the exact bits.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace fw {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::string format_full(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;  // one vector per header entry
};

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

// Provenance record written next to every tool run's outputs.
struct RunManifest {
  std::string command;
  std::string version;
  std::uint64_t seed = 0;
  int threads = 1;
  std::map<std::string, double> params;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> options;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

// Serializes the manifest as JSON with an ISO-8601 UTC timestamp added.
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace fw
