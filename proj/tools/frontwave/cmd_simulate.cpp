#include <cmath>
#include <optional>

#include "common.hpp"
#include "frontwave/pde.hpp"
#include "frontwave/wave.hpp"

namespace fwtool {

namespace {

fw::WeightSpec parse_weight(const nlohmann::json& j) {
  fw::WeightSpec w{j.at("alpha_minus").get<double>(), j.at("alpha_plus").get<double>()};
  fw::require_valid(w);
  return w;
}

std::size_t node_nearest(const fw::Grid1D& g, double x) {
  const auto k = std::llround((x - g.x_min) / g.dx);
  return static_cast<std::size_t>(std::clamp<long long>(k, 0, static_cast<long long>(g.n()) - 1));
}

}  // namespace

int run_simulate(const SimulateArgs& args, const GlobalOpts& g) {
  if (args.config.empty()) throw fw::IoError("simulate requires --config");
  const auto out = ensure_out_dir(g.out);
  const nlohmann::json cfg = load_json(args.config);

  const std::string name = cfg.value("name", "simulation");
  const auto& jp = cfg.at("params");
  const fw::ModelParams p{jp.at("c").get<double>(), jp.at("d").get<double>(),
                          jp.at("r").get<double>()};

  fw::SimConfig sim;
  const auto& jg = cfg.at("grid");
  sim.grid = {jg.at("x_min").get<double>(), jg.at("x_max").get<double>(),
              jg.at("dx").get<double>()};
  sim.params = p;
  const std::string frame = cfg.value("frame", "lab");
  if (frame == "moving") {
    sim.moving_frame = true;
  } else if (frame != "lab") {
    throw fw::IoError("frame must be \"lab\" or \"moving\", got \"" + frame + "\"");
  }
  sim.t_end = cfg.at("t_end").get<double>();
  sim.dt_out = cfg.value("dt_out", 1.0);
  sim.cfl = cfg.value("cfl", 0.4);
  if (args.t_end_override > 0.0) sim.t_end = args.t_end_override;

  int stride = cfg.contains("snapshots") ? cfg.at("snapshots").value("stride", 10) : 10;
  if (args.stride_override > 0) stride = args.stride_override;

  // Initial state --------------------------------------------------------
  const auto& ji = cfg.at("initial");
  const std::string type = ji.at("type").get<std::string>();
  fw::PdeState init;
  std::optional<fw::WaveProfile> prof;
  double x_shift = 0.0;
  if (type == "gaussian") {
    init = fw::gaussian_seed(sim.grid, ji.value("amplitude", 0.5), ji.value("center", 0.0),
                             ji.value("width", 1.0));
  } else if (type == "front_with_bump") {
    const auto front = fw::find_invading_front(p, 1.5, 2.0, ji.value("k_tol", 1e-8));
    prof = fw::build_profile(front.low.K, p);
    if (const double level = ji.value("interface_level", 0.0); level > 0.0) {
      const auto crossing = fw::inactive_level_crossing(*prof, level);
      if (!crossing) throw fw::IoError("interface_level is outside the front's inactive range");
      x_shift = *crossing;
    }
    init = fw::front_state(sim.grid, *prof, x_shift);
    fw::add_weighted_bump(init, sim.grid, parse_weight(ji.at("bump_weight")),
                          ji.at("delta").get<double>(), ji.value("bump_center", 0.0),
                          ji.value("bump_width", 1.0));
  } else {
    throw fw::IoError("unknown initial type \"" + type + "\"");
  }

  const fw::SimResult res = fw::simulate(sim, init);

  // Perturbation runs get an unperturbed twin: the measured norm is the
  // difference between the two simulations, so discretization offsets that
  // both runs share cancel out of the exponentially weighted comparison.
  std::optional<fw::SimResult> base;
  if (prof) base = fw::simulate(sim, fw::front_state(sim.grid, *prof, x_shift));

  // Diagnostics ----------------------------------------------------------
  const nlohmann::json jm =
      cfg.contains("measure") ? cfg.at("measure") : nlohmann::json::object();
  const double level = jm.value("front_level", 0.1);
  std::map<std::string, double> measured;
  measured["min_A"] = res.min_A;
  measured["min_I"] = res.min_I;

  std::vector<double> ts;
  ts.reserve(res.snapshots.size());
  for (const auto& s : res.snapshots) ts.push_back(s.t);

  fw::CsvTable series;
  series.header = {"t"};
  series.columns = {ts};

  if (!prof) {
    std::vector<double> pos, plateau;
    for (const auto& s : res.snapshots) {
      const auto fp = fw::front_position(sim.grid, s, level);
      pos.push_back(fp ? *fp : std::nan(""));
      const auto pv = fw::plateau_value(sim.grid, s, level);
      plateau.push_back(pv ? *pv : std::nan(""));
    }
    series.header.insert(series.header.end(), {"front_position", "plateau"});
    series.columns.insert(series.columns.end(), {pos, plateau});
    if (jm.contains("speed_window")) {
      const auto& w = jm.at("speed_window");
      measured["front_speed"] = fw::fit_front_speed(sim.grid, res.snapshots,
                                                    w.at(0).get<double>(),
                                                    w.at(1).get<double>(), level);
    }
    if (std::isfinite(plateau.back())) measured["plateau"] = plateau.back();
  } else {
    const fw::WeightSpec norm_w = parse_weight(jm.at("norm_weight"));
    const auto& win = jm.at("norm_window");
    const std::size_t k0 = node_nearest(sim.grid, 0.0);
    std::vector<double> norms, interface_vals;
    for (std::size_t idx = 0; idx < res.snapshots.size(); ++idx) {
      norms.push_back(fw::weighted_difference_norm(sim.grid, res.snapshots[idx],
                                                   base->snapshots[idx], norm_w,
                                                   win.at(0).get<double>(),
                                                   win.at(1).get<double>()));
      interface_vals.push_back(res.snapshots[idx].I[k0]);
    }
    series.header.insert(series.header.end(), {"weighted_norm", "interface_inactive"});
    series.columns.insert(series.columns.end(), {norms, interface_vals});
    measured["norm_initial"] = norms.front();
    measured["norm_final"] = norms.back();
    measured["decay_slope"] = fw::decay_exponent_fit(ts, norms, jm.value("fit_t_min", 5.0));
    measured["interface_min"] =
        *std::min_element(interface_vals.begin(), interface_vals.end());
  }
  fw::write_csv((out / "series.csv").string(), series);

  // Snapshots ------------------------------------------------------------
  std::vector<std::string> snapshot_files;
  std::vector<double> xs(sim.grid.n());
  for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = sim.grid.x_at(k);
  for (std::size_t idx = 0; idx < res.snapshots.size(); ++idx) {
    if (idx % static_cast<std::size_t>(stride) != 0 && idx + 1 != res.snapshots.size()) {
      continue;
    }
    char fname[32];
    std::snprintf(fname, sizeof(fname), "snap_%04zu.csv", idx);
    fw::CsvTable snap;
    snap.header = {"x", "A", "I"};
    snap.columns = {xs, res.snapshots[idx].A, res.snapshots[idx].I};
    fw::write_csv((out / fname).string(), snap);
    snapshot_files.push_back(fname);
  }

  // Expectations ---------------------------------------------------------
  nlohmann::json checks = nlohmann::json::object();
  bool ok = true;
  if (cfg.contains("expect")) {
    for (const auto& [key, range] : cfg.at("expect").items()) {
      const auto it = measured.find(key);
      if (it == measured.end()) {
        throw fw::IoError("expect key \"" + key + "\" is not a measured diagnostic");
      }
      const double lo = range.at(0).get<double>(), hi = range.at(1).get<double>();
      const double v = it->second;
      const bool pass = std::isfinite(v) && lo <= v && v <= hi;
      checks[key] = {{"value", v}, {"range", {lo, hi}}, {"pass", pass}};
      ok = ok && pass;
    }
  }

  nlohmann::json summary;
  summary["name"] = name;
  summary["frame"] = frame;
  summary["params"] = {{"c", p.c}, {"d", p.d}, {"r", p.r}};
  summary["grid"] = {{"x_min", sim.grid.x_min}, {"x_max", sim.grid.x_max}, {"dx", sim.grid.dx}};
  summary["t_end"] = sim.t_end;
  summary["dt"] = res.dt;
  if (prof) {
    summary["front"] = {{"K", prof->K}, {"i_plus", prof->i_plus}, {"x_shift", x_shift}};
  }
  summary["measured"] = measured;
  summary["checks"] = checks;
  summary["snapshots"] = snapshot_files;
  summary["pass"] = ok;
  write_json(out / "summary.json", summary);

  fw::RunManifest m = make_manifest("simulate", g);
  m.params = {{"c", p.c}, {"d", p.d}, {"r", p.r}, {"t_end", sim.t_end}, {"dx", sim.grid.dx}};
  m.options = {{"config_name", name}, {"frame", frame}, {"initial", type}};
  m.inputs = {args.config};
  m.outputs = {"series.csv", "summary.json"};
  m.outputs.insert(m.outputs.end(), snapshot_files.begin(), snapshot_files.end());
  fw::write_manifest((out / "manifest.json").string(), m);

  std::printf("%s: %zu snapshots, dt = %.3g\n", name.c_str(), res.snapshots.size(), res.dt);
  for (const auto& [key, v] : measured) std::printf("  %-16s %.6g\n", key.c_str(), v);
  std::printf("%s\n", ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

}  // namespace fwtool
