// Shipping gates for the library: ten quantitative criteria covering the
// invasion-threshold table, the spectral verdict for the computed fronts,
// conservation and tail structure of the profiles, direct simulation, the
// stochastic representation, and the supporting machinery.  Each criterion
// prints one [PASS]/[FAIL] line with its headline numbers; the process exit
// code is the number of failures, so the binary doubles as a ctest entry.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "frontwave/evans.hpp"
#include "frontwave/fk.hpp"
#include "frontwave/model.hpp"
#include "frontwave/ode.hpp"
#include "frontwave/pde.hpp"
#include "frontwave/spectral.hpp"
#include "frontwave/wave.hpp"
#include "frontwave/weight.hpp"

namespace {

using fw::cplx;

struct CellRef {
  double d = 0.0, r = 0.0;
  double k_ref = 0.0;  // published threshold value at c = 2
};

constexpr CellRef kCells[8] = {
    {0.1, 0.0, 1.98489}, {0.2, 0.0, 1.96999}, {0.3, 0.0, 1.95532},
    {0.4, 0.0, 1.94091}, {0.1, 1.0, 1.98430}, {0.2, 1.0, 1.96897},
    {0.3, 1.0, 1.95403}, {0.4, 1.0, 1.93948},
};
constexpr std::size_t kRepCell = 6;  // (d, r) = (0.3, 1): the worked example

// State shared between criteria (fronts feed the spectral and PDE gates).
struct Shared {
  std::vector<fw::FrontResult> fronts;
  std::vector<fw::WaveProfile> profiles;
  std::vector<fw::AssumptionVerdict> verdicts;
  std::vector<fw::TailSnapshot> tail_snaps;  // from the perturbation run
  double rep_rate_behind = 0.0;
};

int g_failures = 0;

// Runs one criterion, catching everything so later gates still execute.
void criterion(int id, const char* label,
               const std::function<std::pair<bool, std::string>()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    std::tie(ok, detail) = body();
  } catch (const std::exception& e) {
    ok = false;
    detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!ok) ++g_failures;
  std::printf("[%s] %02d %-34s %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, label,
              detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// ---------------------------------------------------------------------------
// Criterion 8 helper: explicit finite-difference reference for
//   u_t = u_xx / 2 + c u_x + L u   on x < 0,
// Dirichlet data at x = 0, zero-gradient far field, evaluated at (t, x0).
double fd_reference(double t, double x0, double drift, double L,
                    const std::function<double(double)>& initial,
                    const std::function<double(double)>& boundary) {
  const double x_lo = -10.0, h = 0.01;
  const int n = static_cast<int>(std::llround(-x_lo / h)) + 1;  // nodes x_lo..0
  const double dt = 5e-5;  // well under the h^2 / (2 * 1/2) stability limit
  const long steps = std::lround(t / dt);

  std::vector<double> u(n), next(n);
  for (int k = 0; k < n; ++k) u[k] = initial(x_lo + h * k);
  u[n - 1] = boundary(0.0);

  for (long s = 0; s < steps; ++s) {
    for (int k = 0; k < n - 1; ++k) {
      const double um = (k == 0) ? u[1] : u[k - 1];  // mirror ghost
      const double up = u[k + 1];
      next[k] = u[k] + dt * (0.5 * (um - 2.0 * u[k] + up) / (h * h) +
                             drift * (up - um) / (2.0 * h) + L * u[k]);
    }
    next[n - 1] = boundary(dt * static_cast<double>(s + 1));
    std::swap(u, next);
  }

  const double pos = (x0 - x_lo) / h;
  const int k0 = static_cast<int>(pos);
  const double frac = pos - k0;
  return u[k0] * (1.0 - frac) + u[k0 + 1] * frac;
}

// Criterion 10 helper: 2x2 system u'' + 2 sech^2(x) u = lambda u, which has
// the exact eigenvalue lambda = 1 (eigenfunction sech x).
fw::EvansSystem sech_system() {
  fw::EvansSystem sys;
  sys.n = 2;
  sys.x_left = -15.0;
  sys.x_right = 15.0;
  sys.eval_m = [](double x, cplx lambda, Eigen::MatrixXcd& m) {
    const double sech = 1.0 / std::cosh(x);
    m.resize(2, 2);
    m << 0.0, 1.0, lambda - 2.0 * sech * sech, 0.0;
  };
  const auto split = [](cplx lambda, double sign) {
    const cplx s = sign * std::sqrt(lambda);
    fw::EvansSystem::Split sp;
    sp.projector.resize(2, 2);
    sp.projector << 0.5, 0.5 / s, 0.5 * s, 0.5;
    sp.rate_sum = s;
    sp.dim = 1;
    return sp;
  };
  sys.left = [split](cplx l) { return split(l, +1.0); };
  sys.right = [split](cplx l) { return split(l, -1.0); };
  return sys;
}

}  // namespace

int main() {
  Shared sh;
  std::printf("frontwave acceptance gates\n");

  // 1 -----------------------------------------------------------------------
  criterion(1, "invasion-threshold-table", [&] {
    double worst = 0.0;
    for (const auto& cell : kCells) {
      const fw::ModelParams p{2.0, cell.d, cell.r};
      sh.fronts.push_back(fw::find_invading_front(p, 1.5, 2.0, 1e-8));
      worst = std::max(worst, std::abs(sh.fronts.back().K_star - cell.k_ref));
    }
    return std::make_pair(worst < 1e-3,
                          fmt("8 cells, max |K* - ref| = %.2e < 1e-3", worst));
  });

  // 2 -----------------------------------------------------------------------
  criterion(2, "no-unstable-point-spectrum", [&] {
    if (sh.fronts.size() != 8) return std::make_pair(false, std::string("no fronts"));
    bool all = true;
    double min_abs = 1e300;
    for (std::size_t k = 0; k < 8; ++k) {
      const fw::ModelParams p{2.0, kCells[k].d, kCells[k].r};
      sh.profiles.push_back(fw::build_profile(sh.fronts[k].low.K, p));
      sh.verdicts.push_back(
          fw::check_assumption_region(sh.profiles.back(), {1.0, 1.0}));
      const auto& v = sh.verdicts.back();
      all = all && v.pass && v.winding == 0;
      min_abs = std::min(min_abs, v.contour.min_abs);
    }
    sh.rep_rate_behind = sh.profiles[kRepCell].rate_behind;
    return std::make_pair(
        all, fmt("8 contours: winding 0, min |E| = %.2e", min_abs));
  });

  // 3 -----------------------------------------------------------------------
  criterion(3, "mass-balance-residuals", [&] {
    if (sh.profiles.size() != 8) return std::make_pair(false, std::string("no profiles"));
    double worst = 0.0;
    for (const auto& prof : sh.profiles) {
      const auto mb = fw::mass_balance(prof);
      worst = std::max(worst, mb.max_residual / mb.int_a);
    }
    return std::make_pair(worst < 1e-3,
                          fmt("max relative residual = %.2e < 1e-3", worst));
  });

  // 4 -----------------------------------------------------------------------
  criterion(4, "inactive-sum-bounds", [&] {
    const fw::ModelParams p{2.0, 0.1, 0.0};
    const double lower = 2.0 - 2.0 * p.d * (p.r + 1.0) / (p.c * p.c);
    bool all = true;
    double margin = 1e300;
    for (int j = 1; j <= 20; ++j) {
      const double K = 1.0 + 0.0475 * j;
      const auto shot = fw::shoot(K, p);
      const double sum = K + shot.i_plus;
      all = all && shot.outcome == fw::ShotOutcome::Converged && sum > lower &&
            sum < 2.0;
      margin = std::min({margin, sum - lower, 2.0 - sum});
    }
    return std::make_pair(
        all, fmt("20 fronts: %.3f < K + i_plus < 2, margin %.1e", lower, margin));
  });

  // 5 -----------------------------------------------------------------------
  criterion(5, "tail-decay-rates", [&] {
    if (sh.profiles.size() != 8) return std::make_pair(false, std::string("no profiles"));
    bool all = true;
    double worst_rel = 0.0;
    for (const auto& prof : sh.profiles) {
      const auto dr = fw::measure_decay_rates(prof);
      const double rel = std::abs(dr.behind_fit - dr.behind_formula) / dr.behind_formula;
      worst_rel = std::max(worst_rel, rel);
      all = all && rel < 0.02 && dr.critical && dr.ahead_formula == 1.0;
    }
    // Secular correction of the marginal tail: a ~ x e^{-x} ahead, so
    // log a + x should grow like log x with unit slope.
    const auto& prof = sh.profiles[kRepCell];
    std::vector<double> lx, ly;
    const double hi = std::min(18.0, prof.x_data_hi - 1.0);
    for (double x = 5.0; x <= hi; x += prof.dx) {
      lx.push_back(std::log(x));
      ly.push_back(std::log(prof.eval(x).a) + x);
    }
    const double slope = lsq_slope(lx, ly);
    all = all && slope > 0.9 && slope < 1.1;
    return std::make_pair(all, fmt("rear rate max rel err %.2e; secular slope %.3f",
                                   worst_rel, slope));
  });

  // 6 -----------------------------------------------------------------------
  criterion(6, "invasion-speed-and-plateau", [&] {
    fw::SimConfig sim;
    sim.grid = {-100.0, 100.0, 0.05};
    sim.params = {2.0, 0.0, 0.0};  // no inactive diffusion, no base conversion
    sim.t_end = 40.0;
    const auto res = fw::simulate(sim, fw::gaussian_seed(sim.grid, 0.5, 0.0, 1.0));
    const double speed = fw::fit_front_speed(sim.grid, res.snapshots, 25.0, 40.0);
    const auto plateau = fw::plateau_value(sim.grid, res.snapshots.back());
    const bool ok = plateau && std::abs(speed - 2.0) < 0.05 &&
                    std::abs(*plateau - 2.0) < 0.02;
    return std::make_pair(ok, fmt("speed %.4f (2 +/- 0.05), plateau %.4f (2 +/- 0.02)",
                                  speed, plateau ? *plateau : std::nan("")));
  });

  // 7 -----------------------------------------------------------------------
  criterion(7, "perturbation-relaxation", [&] {
    if (sh.profiles.size() != 8) return std::make_pair(false, std::string("no profiles"));
    const auto& prof = sh.profiles[kRepCell];
    const fw::WeightSpec w{0.5, 1.0};

    fw::SimConfig sim;
    sim.grid = {-90.0, 150.0, 0.05};
    sim.params = prof.params;
    sim.moving_frame = true;
    sim.t_end = 60.0;

    const auto crossing = fw::inactive_level_crossing(prof, 1.02);
    if (!crossing) return std::make_pair(false, std::string("no 1.02 crossing"));
    const fw::PdeState base_init = fw::front_state(sim.grid, prof, *crossing);
    fw::PdeState pert_init = base_init;
    fw::add_weighted_bump(pert_init, sim.grid, w, 0.01, 5.0, 2.5);

    const auto pert = fw::simulate(sim, pert_init);
    const auto base = fw::simulate(sim, base_init);

    const std::size_t k0 =
        static_cast<std::size_t>(std::llround((0.0 - sim.grid.x_min) / sim.grid.dx));
    std::vector<double> ts, norms;
    double interface_min = 1e300;
    std::vector<double> xs(sim.grid.n());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = sim.grid.x_at(k);
    for (std::size_t k = 0; k < pert.snapshots.size(); ++k) {
      ts.push_back(pert.snapshots[k].t);
      norms.push_back(fw::weighted_difference_norm(sim.grid, pert.snapshots[k],
                                                   base.snapshots[k], w, -60.0, 120.0));
      interface_min = std::min(interface_min, pert.snapshots[k].I[k0]);
      sh.tail_snaps.push_back({pert.snapshots[k].t, xs, pert.snapshots[k].A,
                               pert.snapshots[k].I});
    }
    const double slope = fw::decay_exponent_fit(ts, norms, 5.0);
    const bool ok = slope > -1.9 && slope < -1.1 && interface_min >= 1.01;
    return std::make_pair(ok, fmt("decay slope %.3f in (-1.9, -1.1), interface min %.4f",
                                  slope, interface_min));
  });

  // 8 -----------------------------------------------------------------------
  criterion(8, "stochastic-representation", [&] {
    // (a) sampled first-passage law against the exact density.
    fw::PassageConfig ks_cfg;
    ks_cfg.x0 = -1.0;
    ks_cfg.drift = 1.0;
    ks_cfg.dt = 1e-4;
    ks_cfg.n_paths = 100000;
    const auto ks = fw::validate_hitting_density(ks_cfg);

    // (b) stochastic solve of a discounted mixed-data problem against an
    // independent finite-difference march.
    const auto initial = [](double x) { return std::exp(x); };
    const auto boundary = [](double t) { return 1.0 / (1.0 + t); };
    fw::FkProblem prob;
    prob.L = -1.0;
    prob.initial = initial;
    prob.boundary = boundary;
    fw::PassageConfig mc_cfg;
    mc_cfg.x0 = -1.0;
    mc_cfg.drift = 1.0;
    mc_cfg.dt = 1e-4;
    mc_cfg.n_paths = 30000;
    const auto est = fw::fk_solve(2.0, -1.0, prob, mc_cfg);
    const double ref = fd_reference(2.0, -1.0, 1.0, -1.0, initial, boundary);
    const double diff = std::abs(est.value - ref);
    const bool solve_ok = diff < 3.0 * est.stderr_ + 1e-3;

    // (c) tail audit of the perturbation run, plus a spoiled negative control.
    if (sh.tail_snaps.empty()) return std::make_pair(false, std::string("no snapshots"));
    const auto tail =
        fw::tail_bound_check(sh.tail_snaps, 0.01, sh.rep_rate_behind, 2.0);
    std::vector<fw::TailSnapshot> spoiled(sh.tail_snaps.begin(),
                                          sh.tail_snaps.begin() + 10);
    for (auto& s : spoiled) s.I.assign(s.I.size(), 0.5);
    const auto control = fw::tail_bound_check(spoiled, 0.01, sh.rep_rate_behind, 2.0);

    const bool ok = ks.pass && solve_ok && tail.preconditions_ok && tail.pass &&
                    tail.zeta_fit > 0.0 && !control.preconditions_ok && !control.pass;
    return std::make_pair(
        ok, fmt("KS %.4f < %.4f; |MC - FD| %.2e (3se %.2e); zeta %.3f", ks.statistic,
                ks.threshold, diff, 3.0 * est.stderr_, tail.zeta_fit));
  });

  // 9 -----------------------------------------------------------------------
  criterion(9, "spectral-geometry-cross-checks", [&] {
    if (sh.verdicts.size() != 8) return std::make_pair(false, std::string("no verdicts"));
    bool dims_ok = true;
    bool sampled = true;
    for (const auto& v : sh.verdicts) {
      sampled = sampled && v.contour.samples.size() >= 200;
      for (const auto& s : v.contour.samples)
        dims_ok = dims_ok && s.dim_left + s.dim_right == 4;
    }

    const auto& prof = sh.profiles[kRepCell];
    const auto sys = fw::front_system(prof, {1.0, 1.0});
    double conj_err = 0.0;
    for (const cplx l : {cplx{0.5, 0.8}, cplx{1.2, 2.5}, cplx{2.0, 1.0},
                         cplx{3.5, 4.0}, cplx{0.05, 6.0}}) {
      const cplx e = fw::evans_point(sys, l).value;
      const cplx ec = fw::evans_point(sys, std::conj(l)).value;
      conj_err = std::max(conj_err, std::abs(ec - std::conj(e)) / std::abs(e));
    }

    const auto ess = fw::essential_spectrum_curves(
        prof.params, {0.5, 1.0}, prof.K, std::max(prof.i_plus, 0.0));
    double disc = 0.0;
    for (const auto& c : ess.curves) disc = std::max(disc, c.closed_form_discrepancy);

    const auto eb = fw::energy_bound(prof.params);
    const double radius_ref =
        std::numbers::sqrt2 * (1.4 * std::sqrt(20.0) + 6.0);
    const double radius_err = std::abs(eb.radius - radius_ref);

    const bool ok = dims_ok && sampled && conj_err < 1e-8 &&
                    ess.right_edge <= 1e-9 && disc < 1e-6 && radius_err < 1e-12;
    return std::make_pair(ok,
                          fmt("dims 2+2 at every sample; conj sym %.1e; curve "
                              "discrepancy %.1e; radius err %.1e",
                              conj_err, disc, radius_err));
  });

  // 10 ----------------------------------------------------------------------
  criterion(10, "machinery-oracles", [&] {
    // Planted eigenvalue: winding 1 around lambda = 1, tiny |E(1)|.
    const auto sys = sech_system();
    const double e_at_1 = std::abs(fw::evans_point(sys, {1.0, 0.0}).value);
    const double e_off = std::abs(fw::evans_point(sys, {1.5, 0.0}).value);
    std::vector<cplx> loop;
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * std::numbers::pi * k / 64.0;
      loop.push_back(
          fw::evans_point(sys, cplx{1.0 + 0.5 * std::cos(th), 0.5 * std::sin(th)})
              .value);
    }
    const auto wind = fw::winding_number(loop, true);
    const bool evans_ok = wind.winding == 1 && e_at_1 < 1e-5 * e_off;

    // Integrator: accuracy, event location, convergence order, rotation.
    const fw::Field decay = [](double, const std::vector<double>& y,
                               std::vector<double>& dy) { dy[0] = -y[0]; };
    const auto tr = fw::integrate(decay, 0.0, 1.0, {1.0});
    const bool acc_ok = std::abs(tr.back()[0] - std::exp(-1.0)) < 1e-7;

    fw::EventSpec half;
    half.g = [](double, const std::vector<double>& y) { return y[0] - 0.5; };
    const auto te = fw::integrate(decay, 0.0, 5.0, {1.0}, {}, {half});
    const bool event_ok = te.termination == fw::Termination::Event &&
                          std::abs(te.events.at(0).x - std::numbers::ln2) < 1e-8;

    const auto forced_err = [&](double h) {
      fw::IntegratorConfig cfg;
      cfg.rel_tol = 1.0;
      cfg.abs_tol = 1.0;
      cfg.max_step = h;
      cfg.first_step = h;
      const auto t = fw::integrate(decay, 0.0, 1.0, {1.0}, cfg);
      return std::abs(t.back()[0] - std::exp(-1.0));
    };
    const double ratio = forced_err(0.1) / forced_err(0.05);
    const bool order_ok = ratio >= 8.0;

    const fw::Field rotate = [](double, const std::vector<double>& y,
                                std::vector<double>& dy) {
      dy[0] = -y[1];
      dy[1] = y[0];
    };
    fw::IntegratorConfig tight;
    tight.rel_tol = 1e-10;
    const auto tp = fw::integrate(rotate, 0.0, std::numbers::pi, {1.0, 0.0}, tight);
    const bool rot_ok = std::abs(tp.back()[0] + 1.0) < 1e-8 &&
                        std::abs(tp.back()[1]) < 1e-8;

    const bool ok = evans_ok && acc_ok && event_ok && order_ok && rot_ok;
    return std::make_pair(ok, fmt("winding 1, |E(1)|/|E(1.5)| %.1e; step order "
                                  "ratio %.1f",
                                  e_at_1 / e_off, ratio));
  });

  std::printf("%d of 10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
