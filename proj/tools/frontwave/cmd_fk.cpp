#include <algorithm>
#include <cmath>
#include <filesystem>

#include "common.hpp"
#include "frontwave/fk.hpp"

namespace fwtool {

namespace {

// Load snap_NNNN.csv files written by the simulate command; the filename
// index times dt_out recovers each snapshot's time.
std::vector<fw::TailSnapshot> load_tail_snapshots(const std::string& dir, double dt_out) {
  namespace fs = std::filesystem;
  std::vector<std::pair<long, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("snap_", 0) != 0 || entry.path().extension() != ".csv") continue;
    found.emplace_back(std::stol(name.substr(5, name.size() - 9)), entry.path());
  }
  if (found.empty()) throw fw::IoError("no snap_*.csv files in " + dir);
  std::sort(found.begin(), found.end());

  std::vector<fw::TailSnapshot> snaps;
  snaps.reserve(found.size());
  for (const auto& [idx, path] : found) {
    const fw::CsvTable table = fw::read_csv(path.string());
    if (table.header.size() < 3 || table.header[0] != "x" || table.header[1] != "A" ||
        table.header[2] != "I") {
      throw fw::IoError("unexpected snapshot columns in " + path.string());
    }
    snaps.push_back({dt_out * static_cast<double>(idx), table.columns[0], table.columns[1],
                     table.columns[2]});
  }
  return snaps;
}

}  // namespace

int run_validate_fk(const FkArgs& args, const GlobalOpts& g) {
  const auto out = ensure_out_dir(g.out);
  fw::PassageConfig cfg;
  cfg.x0 = args.x0;
  cfg.drift = args.drift;
  cfg.dt = args.dt;
  cfg.t_max = args.t_max;
  cfg.n_paths = args.n_paths;
  cfg.seed = g.seed;
  cfg.threads = g.threads;

  // 1. The sampled first-passage law against its exact density.
  const fw::KsReport ks = fw::validate_hitting_density(cfg);

  // 2. A constant solution must be reproduced exactly (zero variance).
  fw::FkProblem constant;
  constant.initial = [](double) { return 1.0; };
  constant.boundary = [](double) { return 1.0; };
  const fw::FkEstimate const_est = fw::fk_solve(args.t, args.x0, constant, cfg);
  const bool const_ok = const_est.value == 1.0 && const_est.stderr_ == 0.0;

  // 3. A pure-source solve estimates the mean stopped time E[t ^ T0];
  //    quadrature of the density gives the exact value to compare against.
  fw::FkProblem stopped;
  stopped.M = 1.0;
  stopped.initial = [](double) { return 0.0; };
  stopped.boundary = [](double) { return 0.0; };
  const fw::FkEstimate mc = fw::fk_solve(args.t, args.x0, stopped, cfg);
  double exact = args.t * (1.0 - fw::hitting_time_cdf(args.t, args.x0, args.drift));
  {
    // int_0^t s f(s) ds, by midpoint refinement of the closed-form density
    const int n_sub = 4000;
    const double h = args.t / n_sub;
    double acc = 0.0;
    for (int k = 0; k < n_sub; ++k) {
      const double s = (k + 0.5) * h;
      acc += s * fw::hitting_time_density(s, args.x0, args.drift) * h;
    }
    exact += acc;
  }
  const double z = std::abs(mc.value - exact) / std::max(mc.stderr_, 1e-300);
  const bool stopped_ok = z <= 3.0;

  bool ok = ks.pass && const_ok && stopped_ok;

  nlohmann::json rep;
  rep["passage"] = {{"statistic", ks.statistic},
                    {"threshold", ks.threshold},
                    {"censored_fraction", ks.censored_fraction},
                    {"n_used", ks.n_used},
                    {"mean_t0", ks.mean_t0},
                    {"mean_expected", ks.mean_expected},
                    {"pass", ks.pass}};
  rep["constant_solution"] = {{"value", const_est.value},
                              {"stderr", const_est.stderr_},
                              {"pass", const_ok}};
  rep["stopped_time"] = {{"monte_carlo", mc.value},
                         {"stderr", mc.stderr_},
                         {"exact", exact},
                         {"z_score", z},
                         {"pass", stopped_ok}};

  // 4. Optional: audit simulation snapshots for the exponential tail bound on
  //    the activity behind the interface.
  std::string tail_line;
  if (!args.tail_dir.empty()) {
    const auto snaps = load_tail_snapshots(args.tail_dir, args.tail_dt_out);
    const fw::TailReport tail =
        fw::tail_bound_check(snaps, args.tail_delta, args.tail_mu0, args.tail_drift);
    rep["tail"] = {{"preconditions_ok", tail.preconditions_ok},
                   {"precondition_message", tail.precondition_message},
                   {"K0", tail.K0},
                   {"zeta_fit", tail.zeta_fit},
                   {"C_fit", tail.C_fit},
                   {"reference_exponents", tail.reference_exponents},
                   {"pass", tail.pass}};
    ok = ok && tail.pass;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "tail bound: zeta = %.4f (C = %.4g) | %s\n",
                  tail.zeta_fit, tail.C_fit,
                  tail.pass         ? "ok"
                  : tail.preconditions_ok ? "FAILED"
                                          : "preconditions FAILED");
    tail_line = buf;
  }

  rep["pass"] = ok;
  write_json(out / "fk_report.json", rep);

  fw::RunManifest m = make_manifest("validate-fk", g);
  m.params = {{"t", args.t},     {"x0", args.x0}, {"drift", args.drift},
              {"dt", args.dt},   {"t_max", args.t_max},
              {"n_paths", static_cast<double>(args.n_paths)}};
  m.tolerances = {{"ks_threshold", ks.threshold}, {"z_max", 3.0}};
  if (!args.tail_dir.empty()) {
    m.inputs = {args.tail_dir};
    m.params["tail_delta"] = args.tail_delta;
    m.params["tail_mu0"] = args.tail_mu0;
    m.params["tail_drift"] = args.tail_drift;
    m.params["tail_dt_out"] = args.tail_dt_out;
  }
  m.outputs = {"fk_report.json"};
  fw::write_manifest((out / "manifest.json").string(), m);

  std::printf("passage KS %.5f (threshold %.5f), censored %.3g%%\n", ks.statistic,
              ks.threshold, 100.0 * ks.censored_fraction);
  std::printf("stopped time %.6f +/- %.2g vs %.6f (z = %.2f) | %s\n", mc.value, mc.stderr_,
              exact, z, ok ? "ok" : "FAILED");
  if (!tail_line.empty()) std::fputs(tail_line.c_str(), stdout);
  return ok ? 0 : 1;
}

}  // namespace fwtool
