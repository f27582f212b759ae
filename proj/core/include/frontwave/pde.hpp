#pragma once

// Direct simulation of the two-species system, in the lab frame
//   A_t = A_xx + A - A (A + I),        I_t = d I_xx + r A + A (A + I)
// or in a frame moving with speed c (terms + c A_x, + c I_x added).
//
// Discretization: second-order central differences for diffusion and for the
// advection of any diffusing component (stable here because the CFL-limited
// Euler step keeps c^2 dt well below 2 D, and upwinding's numerical diffusion
// c dx/2 would bias the selected speed of a pulled front at first order in
// dx); first-order upwind only for a non-diffusing component.  Explicit Euler
// in time, homogeneous Neumann boundaries via mirror ghosts, except that the
// moving frame's right boundary is an inflow held at its initial value.

#include <functional>
#include <optional>
#include <vector>

#include "frontwave/wave.hpp"
#include "frontwave/weight.hpp"

namespace fw {

struct Grid1D {
  double x_min = -100.0;
  double x_max = 100.0;
  double dx = 0.05;
  size_t n() const { return static_cast<size_t>(std::llround((x_max - x_min) / dx)) + 1; }
  double x_at(size_t k) const { return x_min + dx * static_cast<double>(k); }
};

struct PdeState {
  double t = 0.0;
  std::vector<double> A, I;
};

struct SimConfig {
  Grid1D grid;
  ModelParams params;       // d may be 0 here (no inactive diffusion)
  // Include the + c d/dx transport terms.  Their characteristics enter the
  // domain from the right, so the right boundary becomes an inflow held at
  // its initial value; in the lab frame both ends are homogeneous Neumann.
  bool moving_frame = false;
  double t_end = 40.0;
  double dt_out = 1.0;      // snapshot spacing (integer multiple of dt)
  double cfl = 0.4;
  double blowup_threshold = 1e3;
};

struct SimResult {
  std::vector<PdeState> snapshots;  // t = 0, dt_out, 2 dt_out, ..., t_end
  double dt = 0.0;
  double min_A = 0.0, min_I = 0.0;  // most negative values seen at snapshots
};

class PdeError : public std::runtime_error {
 public:
  explicit PdeError(const std::string& what) : std::runtime_error(what) {}
};

// March the system to t_end, recording snapshots.  Throws PdeError on
// blow-up (|A| exceeding the threshold).
SimResult simulate(const SimConfig& cfg, const PdeState& init);

// Initial states ------------------------------------------------------------

// A = amplitude * exp(-((x - center)/width)^2), I = 0.
PdeState gaussian_seed(const Grid1D& g, double amplitude, double center, double width);

// The computed front placed on the grid, optionally translated by x_shift
// (state value at node x is the profile at x + x_shift).
PdeState front_state(const Grid1D& g, const WaveProfile& prof, double x_shift = 0.0);

// Add delta * w(x) * exp(-((x - center)/width)^2) to the active component
// (the seed for perturbation-decay runs; its weighted norm is ~delta for
// center near the origin).
void add_weighted_bump(PdeState& s, const Grid1D& g, const WeightSpec& w, double delta,
                       double center = 0.0, double width = 1.0);

// Diagnostics ---------------------------------------------------------------

// Rightmost x where A crosses `level` (linear interpolation), if any.
std::optional<double> front_position(const Grid1D& g, const PdeState& s, double level = 0.1);

// Mean of I over [front - 30, front - 20] (the plateau the front leaves behind).
std::optional<double> plateau_value(const Grid1D& g, const PdeState& s, double level = 0.1);

// Least-squares slope of position(t) over t in [t_lo, t_hi].
double fit_front_speed(const Grid1D& g, const std::vector<PdeState>& snaps, double t_lo,
                       double t_hi, double level = 0.1);

// sup over grid nodes in [window_lo, window_hi] of
//   (|A_a(x) - A_b(x)| + |I_a(x) - I_b(x)|) / (w(x) (1 + |x|)).
// Comparing a perturbed run against an unperturbed twin isolates the
// perturbation itself: discretization offsets shared by both runs (tail-rate
// dispersion, boundary layers) cancel instead of being amplified by 1/w.
double weighted_difference_norm(const Grid1D& g, const PdeState& a, const PdeState& b,
                                const WeightSpec& w, double window_lo, double window_hi);

// Same norm measured against the translated reference profile itself.
double weighted_perturbation_norm(const Grid1D& g, const PdeState& s,
                                  const WaveProfile& prof, double x_shift,
                                  const WeightSpec& w, double window_lo,
                                  double window_hi);

// Least-squares slope of log(norm) against log(1 + t) for t >= t_min.
double decay_exponent_fit(const std::vector<double>& ts, const std::vector<double>& norms,
                          double t_min);

}  // namespace fw
