#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "frontwave/io.hpp"
#include "json.hpp"

namespace fwtool {

inline constexpr const char* kVersion = "frontwave 1.0.0";

// Options shared by every subcommand (fallthrough from the top-level app).
struct GlobalOpts {
  std::string out = ".";
  std::uint64_t seed = 12345;
  int threads = 1;
};

std::filesystem::path ensure_out_dir(const std::string& out);
nlohmann::json load_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
fw::RunManifest make_manifest(const std::string& command, const GlobalOpts& g);

// Subcommand entry points.  Return value is the process exit code: 0 for a
// clean run, 1 when a computed quantity violates its expected range.  Usage
// and configuration problems are reported by throwing (mapped to 2 in main).
struct WaveArgs {
  double c = 2.0, d = 0.3, r = 1.0;
  double k_lo = 1.5, k_hi = 2.0, k_tol = 1e-6;
};
int run_wave(const WaveArgs& args, const GlobalOpts& g);

struct SpectrumArgs {
  double c = 2.0, d = 0.3, r = 1.0;
  double alpha_minus = 0.5, alpha_plus = 1.0;
  double im_max = 10.0;
  int n_curve = 201;
  bool evans = false;
};
int run_spectrum(const SpectrumArgs& args, const GlobalOpts& g);

struct SimulateArgs {
  std::string config;
  double t_end_override = 0.0;  // > 0 replaces the config value
  int stride_override = 0;      // > 0 replaces the config snapshot stride
};
int run_simulate(const SimulateArgs& args, const GlobalOpts& g);

struct FkArgs {
  double t = 1.0, x0 = -1.0, drift = 1.0, dt = 1e-4, t_max = 20.0;
  std::size_t n_paths = 100000;
  // Tail-bound audit of simulation snapshots (skipped when tail_dir is empty).
  std::string tail_dir;
  double tail_delta = 0.01, tail_mu0 = 0.0, tail_drift = 2.0, tail_dt_out = 1.0;
};
int run_validate_fk(const FkArgs& args, const GlobalOpts& g);

struct ReportArgs {
  bool full = false;  // include spectrum curves and the Evans verdict
};
int run_report(const ReportArgs& args, const GlobalOpts& g);

}  // namespace fwtool
