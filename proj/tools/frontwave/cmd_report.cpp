#include <fstream>

#include "common.hpp"
#include "frontwave/evans.hpp"
#include "frontwave/spectral.hpp"
#include "frontwave/wave.hpp"

namespace fwtool {

namespace {

struct Cell {
  fw::ModelParams p;
  double K_star = 0.0;
  double i_plus = 0.0;
  double mass_residual = 0.0;
  fw::LimitRelation lim;
  bool shape_ok = false;
  bool ok() const { return shape_ok && lim.holds && mass_residual < 1e-3; }
};

Cell solve_cell(double d, double r) {
  Cell cell;
  cell.p = {2.0, d, r};
  const auto front = fw::find_invading_front(cell.p, 1.5, 2.0, 1e-6);
  const auto prof = fw::build_profile(front.low.K, cell.p);
  cell.K_star = front.K_star;
  cell.i_plus = prof.i_plus;
  cell.mass_residual = fw::mass_balance(prof).max_residual;
  cell.lim = fw::limit_relation_check(prof);
  cell.shape_ok = fw::check_front_shape(prof).all();
  return cell;
}

}  // namespace

int run_report(const ReportArgs& args, const GlobalOpts& g) {
  const auto out = ensure_out_dir(g.out);
  const std::vector<double> ds = {0.1, 0.2, 0.3, 0.4};
  const std::vector<double> rs = {0.0, 1.0};

  std::vector<std::vector<Cell>> table;
  bool ok = true;
  for (const double r : rs) {
    auto& row = table.emplace_back();
    for (const double d : ds) {
      row.push_back(solve_cell(d, r));
      ok = ok && row.back().ok();
    }
  }

  nlohmann::json rj;
  rj["speed"] = 2.0;
  rj["cells"] = nlohmann::json::array();
  for (const auto& row : table) {
    for (const auto& cell : row) {
      rj["cells"].push_back({{"d", cell.p.d},
                             {"r", cell.p.r},
                             {"K_star", cell.K_star},
                             {"i_plus", cell.i_plus},
                             {"mass_residual", cell.mass_residual},
                             {"inactive_sum", cell.lim.sum},
                             {"inactive_sum_lower", cell.lim.lower},
                             {"checks_ok", cell.ok()}});
    }
  }

  std::ofstream md(out / "report.md");
  if (!md) throw fw::IoError("cannot open report.md for writing");
  md << "# frontwave report\n\n"
     << "Invading fronts of the active/inactive reaction-diffusion system at the\n"
     << "minimal frame speed c = 2.  K* is the largest inactive level behind the\n"
     << "front for which invasion still consumes everything ahead.\n\n";
  md << "## Invasion thresholds K*(d, r)\n\n| r \\ d |";
  for (const double d : ds) md << " " << d << " |";
  md << "\n|---|";
  for (std::size_t j = 0; j < ds.size(); ++j) md << "---|";
  md << "\n";
  char buf[64];
  for (std::size_t i = 0; i < rs.size(); ++i) {
    md << "| " << rs[i] << " |";
    for (const auto& cell : table[i]) {
      std::snprintf(buf, sizeof(buf), " %.5f |", cell.K_star);
      md << buf;
    }
    md << "\n";
  }
  md << "\n## Integral identities\n\n"
     << "| d | r | mass residual | inactive sum | lower bound | checks |\n"
     << "|---|---|---|---|---|---|\n";
  for (const auto& row : table) {
    for (const auto& cell : row) {
      std::snprintf(buf, sizeof(buf), "| %.1f | %.0f | %.2e | %.5f | %.5f | %s |\n",
                    cell.p.d, cell.p.r, cell.mass_residual, cell.lim.sum, cell.lim.lower,
                    cell.ok() ? "ok" : "FAILED");
      md << buf;
    }
  }

  if (args.full) {
    const fw::ModelParams p{2.0, 0.3, 1.0};
    const auto front = fw::find_invading_front(p, 1.5, 2.0, 1e-8);
    const auto prof = fw::build_profile(front.low.K, p);
    const fw::WeightSpec blend{0.5, 1.0};
    const auto ess = fw::essential_spectrum_curves(p, blend, prof.K, 0.0);
    const auto verdict = fw::check_assumption_region(prof, fw::WeightSpec{1.0, 1.0});
    ok = ok && ess.right_edge <= 1e-9 && verdict.pass;

    rj["spectrum"] = {{"params", {{"c", p.c}, {"d", p.d}, {"r", p.r}}},
                      {"essential_right_edge", ess.right_edge},
                      {"evans_winding", verdict.winding},
                      {"evans_radius", verdict.radius},
                      {"evans_closure_residual", verdict.closure_residual},
                      {"evans_pass", verdict.pass}};

    md << "\n## Spectrum of the critical front (d = 0.3, r = 1)\n\n";
    std::snprintf(buf, sizeof(buf), "%.4f", ess.right_edge);
    md << "- essential spectrum right edge (weights 0.5/1.0): " << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.4f", verdict.radius);
    md << "- point-spectrum winding in the weight e^{-x}: " << verdict.winding
       << " on the half-annulus of radius " << buf << "\n";
  }

  md << "\nOverall: " << (ok ? "ok" : "FAILED") << "\n";
  md.close();
  if (!md) throw fw::IoError("write failed for report.md");

  rj["pass"] = ok;
  write_json(out / "report.json", rj);

  fw::RunManifest m = make_manifest("report", g);
  m.options = {{"full", args.full ? "true" : "false"}};
  m.tolerances = {{"mass_residual_max", 1e-3}};
  m.outputs = {"report.md", "report.json"};
  fw::write_manifest((out / "manifest.json").string(), m);

  std::printf("report: %zu cells | %s\n", table.size() * ds.size(), ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

}  // namespace fwtool
