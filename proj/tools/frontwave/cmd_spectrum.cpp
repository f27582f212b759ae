#include "common.hpp"
#include "frontwave/evans.hpp"
#include "frontwave/spectral.hpp"

namespace fwtool {

int run_spectrum(const SpectrumArgs& args, const GlobalOpts& g) {
  fw::ModelParams p{args.c, args.d, args.r};
  fw::require_admissible(p);
  fw::WeightSpec curve_weight{args.alpha_minus, args.alpha_plus};
  fw::require_valid(curve_weight);
  const auto out = ensure_out_dir(g.out);

  // The Evans verdict wants a sharply resolved threshold (the critical tail
  // kicks in only within ~1e-6 of K*), curves alone do not.
  const double k_tol = args.evans ? 1e-8 : 1e-6;
  const fw::FrontResult front = fw::find_invading_front(p, 1.5, 2.0, k_tol);
  const fw::WaveProfile prof = fw::build_profile(front.low.K, p);
  const double i_plus = prof.critical ? 0.0 : prof.i_plus;

  const fw::EssentialSpectrum ess = fw::essential_spectrum_curves(
      p, curve_weight, prof.K, i_plus, {args.im_max, args.n_curve});

  fw::CsvTable curves;
  curves.header = {"family", "re_lambda", "im_lambda"};
  curves.columns.resize(3);
  for (const auto& curve : ess.curves) {
    const double family_id = static_cast<double>(curve.family);
    for (const auto& z : curve.points) {
      curves.columns[0].push_back(family_id);
      curves.columns[1].push_back(z.real());
      curves.columns[2].push_back(z.imag());
    }
  }
  fw::write_csv((out / "curves.csv").string(), curves);

  nlohmann::json vj;
  vj["params"] = {{"c", p.c}, {"d", p.d}, {"r", p.r}};
  vj["weight"] = {{"alpha_minus", args.alpha_minus}, {"alpha_plus", args.alpha_plus}};
  vj["K_star"] = front.K_star;
  vj["i_plus"] = i_plus;
  vj["essential"] = nlohmann::json::object();
  for (const auto& curve : ess.curves) {
    vj["essential"][fw::curve_family_name(curve.family)] = {
        {"max_real", curve.max_real},
        {"half_line", curve.half_line},
        {"closed_form_discrepancy", curve.closed_form_discrepancy}};
  }
  vj["essential"]["right_edge"] = ess.right_edge;

  // The critical front's degenerate family is the half-line ending at the
  // origin, so "stable" means: nothing to the right of 0, and the closed
  // forms agree with the root-found curves.
  bool ok = ess.right_edge <= 1e-9;
  for (const auto& curve : ess.curves) ok = ok && curve.closed_form_discrepancy < 1e-6;

  if (args.evans) {
    // Point-spectrum count in the plain exponential weight e^{-x}; the verdict
    // region is bounded by the energy estimate.
    const fw::WeightSpec evans_weight{1.0, 1.0};
    const fw::AssumptionVerdict verdict = fw::check_assumption_region(prof, evans_weight);

    fw::CsvTable contour;
    contour.header = {"re_lambda", "im_lambda", "re_E", "im_E"};
    contour.columns.resize(4);
    for (const auto& s : verdict.contour.samples) {
      contour.columns[0].push_back(s.lambda.real());
      contour.columns[1].push_back(s.lambda.imag());
      contour.columns[2].push_back(s.value.real());
      contour.columns[3].push_back(s.value.imag());
    }
    fw::write_csv((out / "contour.csv").string(), contour);

    vj["evans"] = {{"weight", {{"alpha_minus", 1.0}, {"alpha_plus", 1.0}}},
                   {"winding", verdict.winding},
                   {"closure_residual", verdict.closure_residual},
                   {"radius", verdict.radius},
                   {"delta", verdict.delta},
                   {"contour_samples", verdict.contour.samples.size()},
                   {"min_abs_E", verdict.contour.min_abs},
                   {"dims_consistent", verdict.dims_consistent},
                   {"pass", verdict.pass}};
    ok = ok && verdict.pass;

    std::printf("evans: winding %ld on |lambda| in [%g, %.4f], closure %.2e, %zu samples\n",
                verdict.winding, verdict.delta, verdict.radius, verdict.closure_residual,
                verdict.contour.samples.size());
  }

  vj["pass"] = ok;
  write_json(out / "verdict.json", vj);

  fw::RunManifest m = make_manifest("spectrum", g);
  m.params = {{"c", p.c},
              {"d", p.d},
              {"r", p.r},
              {"alpha_minus", args.alpha_minus},
              {"alpha_plus", args.alpha_plus},
              {"im_max", args.im_max}};
  m.options = {{"evans", args.evans ? "true" : "false"}};
  m.outputs = {"curves.csv", "verdict.json"};
  if (args.evans) m.outputs.push_back("contour.csv");
  fw::write_manifest((out / "manifest.json").string(), m);

  std::printf("essential spectrum right edge %.4f | %s\n", ess.right_edge,
              ok ? "ok" : "FAILED");
  return ok ? 0 : 1;
}

}  // namespace fwtool
