#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "common.hpp"

int main(int argc, char** argv) {
  CLI::App app{"invading fronts of an active/inactive reaction-diffusion system"};
  app.set_version_flag("--version", std::string(fwtool::kVersion));
  app.require_subcommand(1);

  fwtool::GlobalOpts g;
  app.add_option("--out", g.out, "output directory for artifacts")->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed (Monte-Carlo commands)")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (Monte-Carlo commands)")
      ->capture_default_str();

  fwtool::WaveArgs wave_args;
  auto* wave = app.add_subcommand(
      "wave", "solve the invasion threshold K* and write the front profile");
  wave->fallthrough();
  wave->add_option("--c", wave_args.c, "frame speed")->capture_default_str();
  wave->add_option("--d", wave_args.d, "inactive diffusivity")->capture_default_str();
  wave->add_option("--r", wave_args.r, "deactivation rate")->capture_default_str();
  wave->add_option("--k-lo", wave_args.k_lo, "bisection bracket low end")
      ->capture_default_str();
  wave->add_option("--k-hi", wave_args.k_hi, "bisection bracket high end")
      ->capture_default_str();
  wave->add_option("--k-tol", wave_args.k_tol, "bracket width at termination")
      ->capture_default_str();

  fwtool::SpectrumArgs spec_args;
  auto* spectrum = app.add_subcommand(
      "spectrum", "essential-spectrum curves (and, with --evans, the point-spectrum count)");
  spectrum->fallthrough();
  spectrum->add_option("--c", spec_args.c, "frame speed")->capture_default_str();
  spectrum->add_option("--d", spec_args.d, "inactive diffusivity")->capture_default_str();
  spectrum->add_option("--r", spec_args.r, "deactivation rate")->capture_default_str();
  spectrum->add_option("--alpha-minus", spec_args.alpha_minus,
                       "weight rate behind the front (must be < c/2)")
      ->capture_default_str();
  spectrum->add_option("--alpha-plus", spec_args.alpha_plus, "weight rate ahead of the front")
      ->capture_default_str();
  spectrum->add_option("--im-max", spec_args.im_max, "curve extent in Im(lambda)")
      ->capture_default_str();
  spectrum->add_option("--n-curve", spec_args.n_curve, "samples per curve")
      ->capture_default_str();
  spectrum->add_flag("--evans", spec_args.evans,
                     "count unstable point spectrum in the weight e^{-x}");

  fwtool::SimulateArgs sim_args;
  auto* simulate =
      app.add_subcommand("simulate", "run a configured PDE simulation and check expectations");
  simulate->fallthrough();
  simulate->add_option("--config", sim_args.config, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  simulate->add_option("--t-end", sim_args.t_end_override, "override the configured end time");
  simulate->add_option("--stride", sim_args.stride_override,
                       "override the snapshot output stride");

  fwtool::FkArgs fk_args;
  auto* fk = app.add_subcommand(
      "validate-fk", "Monte-Carlo validation of the first-passage representation");
  fk->fallthrough();
  fk->add_option("--t", fk_args.t, "solve horizon")->capture_default_str();
  fk->add_option("--x0", fk_args.x0, "start position (< 0)")->capture_default_str();
  fk->add_option("--drift", fk_args.drift, "drift toward the boundary")->capture_default_str();
  fk->add_option("--dt", fk_args.dt, "Euler-Maruyama step")->capture_default_str();
  fk->add_option("--t-max", fk_args.t_max, "censor horizon for the passage law")
      ->capture_default_str();
  fk->add_option("--n", fk_args.n_paths, "number of sample paths")->capture_default_str();
  fk->add_option("--tail-dir", fk_args.tail_dir,
                 "directory of simulate snapshots to audit for the activity tail bound")
      ->check(CLI::ExistingDirectory);
  fk->add_option("--tail-delta", fk_args.tail_delta, "interface margin delta")
      ->capture_default_str();
  fk->add_option("--tail-mu0", fk_args.tail_mu0,
                 "initial activity envelope rate (e.g. the front's rear decay rate)");
  fk->add_option("--tail-drift", fk_args.tail_drift, "frame speed behind the tail estimate")
      ->capture_default_str();
  fk->add_option("--tail-dt-out", fk_args.tail_dt_out, "snapshot index-to-time spacing")
      ->capture_default_str();

  fwtool::ReportArgs rep_args;
  auto* report =
      app.add_subcommand("report", "threshold table and front checks across (d, r)");
  report->fallthrough();
  report->add_flag("--full", rep_args.full, "also run the spectrum analysis (slower)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (wave->parsed()) return fwtool::run_wave(wave_args, g);
    if (spectrum->parsed()) return fwtool::run_spectrum(spec_args, g);
    if (simulate->parsed()) return fwtool::run_simulate(sim_args, g);
    if (fk->parsed()) return fwtool::run_validate_fk(fk_args, g);
    if (report->parsed()) return fwtool::run_report(rep_args, g);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;  // unreachable with require_subcommand(1)
}
