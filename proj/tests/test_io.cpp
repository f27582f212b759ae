// Artifact writers: bit-exact number round-trips, CSV structure errors, and
// the manifest's JSON shape.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "frontwave/io.hpp"
#include "json.hpp"

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("frontwave_io_test_" + std::to_string(std::rand()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

const double kAwkward[] = {1.0 / 3.0,          1e-300, 6.62607015e-34,
                           -0.0,               1e308,  17.339658822710035,
                           -123456.789012345678};

}  // namespace

TEST_CASE("format_full round-trips bits through text") {
  for (const double v : kAwkward) {
    const std::string s = fw::format_full(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
    // -0.0 must keep its sign through the text form.
    if (v == 0.0) CHECK(std::signbit(back) == std::signbit(v));
  }
}

TEST_CASE("csv: write, read back, bitwise equality") {
  TempDir tmp;
  fw::CsvTable table;
  table.header = {"x", "value", "other"};
  table.columns.resize(3);
  for (int k = 0; k < 40; ++k) {
    table.columns[0].push_back(0.05 * k - 1.0);
    table.columns[1].push_back(kAwkward[k % 7]);
    table.columns[2].push_back(std::sin(0.3 * k) * 1e-7);
  }
  const std::string path = tmp.file("table.csv");
  fw::write_csv(path, table);

  const auto back = fw::read_csv(path);
  REQUIRE(back.header == table.header);
  REQUIRE(back.columns.size() == 3);
  for (size_t c = 0; c < 3; ++c) {
    REQUIRE(back.columns[c].size() == table.columns[c].size());
    for (size_t k = 0; k < back.columns[c].size(); ++k) {
      CHECK(back.columns[c][k] == table.columns[c][k]);
    }
  }
}

TEST_CASE("csv: structural errors") {
  TempDir tmp;
  fw::CsvTable ragged;
  ragged.header = {"a", "b"};
  ragged.columns = {{1.0, 2.0}, {3.0}};
  CHECK_THROWS_AS(fw::write_csv(tmp.file("ragged.csv"), ragged), fw::IoError);

  CHECK_THROWS_AS(fw::read_csv(tmp.file("missing.csv")), fw::IoError);

  // A row with the wrong number of fields is rejected on read.
  const std::string path = tmp.file("bad.csv");
  std::ofstream(path) << "a,b\n1.0,2.0\n3.0\n";
  CHECK_THROWS_AS(fw::read_csv(path), fw::IoError);
}

TEST_CASE("manifest is well-formed JSON with full-precision params") {
  TempDir tmp;
  fw::RunManifest m;
  m.command = "wave";
  m.version = "frontwave 1.0.0";
  m.seed = 987654321;
  m.threads = 3;
  m.params = {{"c", 2.0}, {"K_star", 1.0 / 3.0}};
  m.tolerances = {{"k_tol", 1e-6}};
  m.options = {{"out", "/tmp/somewhere"}};
  m.inputs = {"config.json"};
  m.outputs = {"profile.csv", "profile.json"};

  const std::string path = tmp.file("manifest.json");
  fw::write_manifest(path, m);

  std::ifstream in(path);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  CHECK(j.at("command") == "wave");
  CHECK(j.at("version") == "frontwave 1.0.0");
  CHECK(j.at("seed").get<std::uint64_t>() == 987654321u);
  CHECK(j.at("threads").get<int>() == 3);
  CHECK(std::strtod(j.at("params").at("K_star").get<std::string>().c_str(), nullptr) ==
        1.0 / 3.0);
  CHECK(j.at("tolerances").at("k_tol").is_string());
  CHECK(j.at("options").at("out") == "/tmp/somewhere");
  CHECK(j.at("inputs").size() == 1);
  CHECK(j.at("outputs").size() == 2);
  // ISO-8601 UTC timestamp: "....-..-..T..:..:..Z".
  const std::string ts = j.at("timestamp").get<std::string>();
  REQUIRE(ts.size() == 20);
  CHECK(ts[4] == '-');
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
}
