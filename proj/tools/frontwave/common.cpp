#include "common.hpp"

#include <fstream>

namespace fwtool {

std::filesystem::path ensure_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw fw::IoError("cannot create output directory " + dir.string());
  return dir;
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw fw::IoError("cannot open config " + path.string());
  nlohmann::json j;
  in >> j;
  return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw fw::IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw fw::IoError("write failed for " + path.string());
}

fw::RunManifest make_manifest(const std::string& command, const GlobalOpts& g) {
  fw::RunManifest m;
  m.command = command;
  m.version = kVersion;
  m.seed = g.seed;
  m.threads = g.threads;
  return m;
}

}  // namespace fwtool
