#pragma once

// Front construction by shooting.  A front leaves the invaded rest state
// (0, 0, K, 0) along its one-dimensional unstable manifold; integrating that
// branch forward either converges to an uninvaded state (0, 0, i_plus, 0)
// with i_plus >= 0, or the densities go negative.  The invasion threshold
// K* — the largest K whose front consumes everything ahead (i_plus = 0) —
// separates the two outcomes and is located by bisection.

#include <optional>
#include <vector>

#include "frontwave/model.hpp"
#include "frontwave/ode.hpp"

namespace fw {

struct ShootConfig {
  double epsilon = 1e-7;    // offset along the unstable direction at launch
  double arm_level = 1e-4;  // a-level at which outcome detection switches on
  double conv_tol = 1e-8;   // convergence: max(|a|, |a'|, |i'|) below this
  double neg_tol = 1e-9;    // negativity: min(a, i) below -neg_tol
  double span = 4000.0;     // per-phase integration budget in x
  IntegratorConfig integ{1e-10, 1e-14, 1.0, 0.0, 1'000'000, 1e6, 1e-10, false};
};

enum class ShotOutcome { Converged, WentNegative, Diverged, Undecided };

struct ShotResult {
  ShotOutcome outcome = ShotOutcome::Undecided;
  double K = 0.0;
  double i_plus = 0.0;        // limit ahead, Richardson-corrected (Converged only)
  double x_arm = 0.0;         // where a first reached arm_level
  double x_end = 0.0;         // where the deciding event fired
  WaveState y_end{};          // state there
  // Phase trajectories (dense iff requested): launch->arm, arm->decision.
  Trajectory escape, excursion;
};

// Integrate the unstable branch for one K.  `dense` keeps the interpolants
// (needed to build a profile afterwards).
ShotResult shoot(double K, const ModelParams& p, const ShootConfig& cfg = {},
                 bool dense = false);

struct FrontResult {
  double K_star = 0.0;        // bracket midpoint at termination
  double uncertainty = 0.0;   // final half-width
  int n_shots = 0;
  ShotResult low;             // last converged shot (K just below K*)
};

// Bisect [bracket_lo, bracket_hi] for the invasion threshold K*.
// Preconditions checked: the low end converges with i_plus > 0, the high end
// fails (negativity).  Terminates when the bracket is narrower than k_tol.
FrontResult find_invading_front(const ModelParams& p, double bracket_lo = 1.5,
                                double bracket_hi = 2.0, double k_tol = 1e-6,
                                const ShootConfig& cfg = {});

// A front resampled onto a uniform grid centered so that a'(0) = 0 (the
// activity maximum sits at x = 0).  Outside the trajectory-backed extent
// [x_data_lo, x_data_hi] the stored values come from the analytic tail
// asymptotics; fits and diagnostics that claim to measure the computed wave
// must stay inside the data extent.
struct WaveProfile {
  ModelParams params;
  double K = 0.0;       // inactive level behind (i at -inf)
  double i_plus = 0.0;  // inactive level ahead (may be ~0 at criticality)
  bool critical = false;

  double x_min = -50.0, dx = 0.05;
  std::vector<double> a, ap, i, ipr;  // node values of (a, a', i, i')

  double x_data_lo = 0.0, x_data_hi = 0.0;  // genuine-trajectory extent
  double rate_behind = 0.0;  // e^{rate_behind * x} approach as x -> -inf
  double rate_ahead = 0.0;   // e^{-rate_ahead * x} decay as x -> +inf

  double x_max() const { return x_min + dx * static_cast<double>(a.size() - 1); }
  size_t size() const { return a.size(); }
  double x_at(size_t k) const { return x_min + dx * static_cast<double>(k); }

  struct PointValues {
    double a = 0.0, ap = 0.0, i = 0.0, ipr = 0.0;
  };
  // Cubic-Hermite interpolation on the grid; analytic exponential (or secular
  // x e^{-x}) tails beyond the grid ends.  Valid for every real x.
  PointValues eval(double x) const;
};

struct ProfileGridSpec {
  double half_width = 50.0;
  double dx = 0.05;
};

// Shoot at K (must converge) and resample the front onto the centered grid.
WaveProfile build_profile(double K, const ModelParams& p, const ShootConfig& cfg = {},
                          const ProfileGridSpec& grid = {});

// Largest x with i(x) = level (i decreases monotonically along the front).
// Empty if the level is outside (i_plus, K).
std::optional<double> inactive_level_crossing(const WaveProfile& prof, double level);

// Conservation identity linking the activity mass to the inactive deficit:
//   int a dx  =  int a (a + i) dx  =  c (i_-inf - i_+inf) / (1 + r).
// Quadrature spans the analytic tails, so all three numbers are limits of the
// same front; the residuals expose integration/convergence error.
struct MassBalance {
  double int_a = 0.0;
  double int_reaction = 0.0;
  double flux_form = 0.0;
  double max_residual = 0.0;
};
MassBalance mass_balance(const WaveProfile& prof);

// Exponential decay rates measured by least-squares on log a inside the
// data-backed extent, compared with the linearization formulas.
struct DecayRates {
  double behind_fit = 0.0, behind_formula = 0.0;
  double ahead_fit = 0.0, ahead_formula = 0.0;  // |d/dx log a|; 1 at criticality
  bool critical = false;
  double window_behind[2] = {0.0, 0.0};
  double window_ahead[2] = {0.0, 0.0};
};
DecayRates measure_decay_rates(const WaveProfile& prof);

// Two-sided bound on the total inactive mass of a front:
//   2 - 2 d (r + 1) / c^2   <   i_-inf + i_+inf   <   2.
// `lower_alt` carries the weaker /c variant of the lower bound for visibility;
// `holds` refers to the strict /c^2 form.
struct LimitRelation {
  double sum = 0.0;
  double lower = 0.0;      // 2 - 2 d (r+1) / c^2
  double lower_alt = 0.0;  // 2 - 2 d (r+1) / c
  double upper = 2.0;
  bool holds = false;
};
LimitRelation limit_relation_check(const WaveProfile& prof);

// Pointwise front properties on the data-backed extent: a > 0 with a single
// interior maximum, i strictly decreasing, and a + i <= 1 at the activity
// maximum (a''(0) <= 0 forces the reaction term nonpositive there).
struct FrontShapeChecks {
  bool a_positive = false;
  bool single_max = false;
  bool i_decreasing = false;
  bool crowding_bound = false;  // a(0) + i(0) <= 1 + tol
  bool all() const { return a_positive && single_max && i_decreasing && crowding_bound; }
};
FrontShapeChecks check_front_shape(const WaveProfile& prof);

}  // namespace fw
