#pragma once

// Evans determinant machinery.
//
// For U' = M(x, lambda) U on the line, with k1 rates growing at -inf and
// k2 = n - k1 decaying at +inf, the Evans value at lambda is
//
//   E(lambda) = det[ X_1 ... X_k1  Y_1 ... Y_k2 ](x = 0) * normalization,
//
// where the X_i span the solutions leaving -inf along the growing cluster and
// the Y_j those approaching +inf along the decaying cluster.  E vanishes iff
// the two families intersect, i.e. iff lambda is an eigenvalue.  Zeros inside
// a closed contour are counted by the winding number of E along it.
//
// Numerics: each family is evolved as an orthonormal frame Omega (the
// Gauss-reduced flow Omega' = M Omega - Omega (Omega* M Omega)) plus a scalar
// log-determinant rho' = tr(Omega* M Omega) - g, where g is the sum of the
// cluster's limit rates.  Subtracting g normalizes away the e^{g L} bulk
// growth exactly and analytically, so E stays O(1), analytic in lambda, and
// stable under enlarging the domain half-length L.
//
// Frames along a contour are continued by projector transport,
// F_next = P(lambda_next) F_prev, which stays smooth even where individual
// spatial rates (and hence eigenvector bases) collide.

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "frontwave/ode.hpp"
#include "frontwave/spectral.hpp"

namespace fw {

struct EvansSystem {
  int n = 4;                 // system dimension
  double x_left = -50.0;     // where the left frames start
  double x_right = 50.0;     // where the right frames start
  std::function<void(double x, cplx lambda, Eigen::MatrixXcd& M)> eval_m;
  // Cluster data of the limit matrices: projector (n x n), rate sum, dim.
  struct Split {
    Eigen::MatrixXcd projector;
    cplx rate_sum = 0.0;
    int dim = 0;
  };
  std::function<Split(cplx lambda)> left;   // growing cluster at -inf
  std::function<Split(cplx lambda)> right;  // decaying cluster at +inf
};

struct EvansSample {
  cplx lambda;
  cplx value;
  int dim_left = 0, dim_right = 0;
};

// Single-point evaluation from canonical frames (deterministic orthonormal
// bases of the projector ranges).  The overall nonzero scale of E depends on
// that frame choice; zero-detection and conjugate symmetry do not.
EvansSample evans_point(const EvansSystem& sys, cplx lambda,
                        const IntegratorConfig& integ = {1e-8, 1e-10});

// Five-point stencil with frames transported from the center: E is analytic
// in lambda under transported frames, so (E(l+h)-E(l-h))/2h etc. give honest
// Cauchy-Riemann diagnostics.
struct EvansPatch {
  EvansSample center, re_plus, re_minus, im_plus, im_minus;
  double h = 0.0;
  double cr_residual_rel = 0.0;  // |d E / d conj(lambda)| / |d E / d lambda|
};
EvansPatch evans_patch(const EvansSystem& sys, cplx lambda, double h,
                       const IntegratorConfig& integ = {1e-8, 1e-10});

// Winding of a closed (or open) polyline of nonzero complex values by
// principal-branch argument increments.  Throws SpectralError if a single
// increment reaches pi (sampling too coarse to trust).
struct WindingResult {
  long winding = 0;
  double residual = 0.0;  // |sum of increments - 2 pi winding|
  double max_jump = 0.0;
};
WindingResult winding_number(const std::vector<cplx>& values, bool closed);

struct ContourSpec {
  double delta = 1e-3;   // inner radius around the origin
  double radius = 10.0;  // outer radius (energy bound)
  int n_init = 256;      // initial boundary samples
  double max_arg_jump = 0.5235987755982988;  // pi/6 refinement threshold
  int max_refine_rounds = 12;
};

struct EvansContourResult {
  std::vector<EvansSample> samples;  // ordered along the boundary, not closed
  long winding = 0;
  double closure_residual = 0.0;
  double max_arg_jump = 0.0;
  double min_abs = 0.0;
  bool dims_consistent = true;  // every sample had dim_left + dim_right == n
  int refine_rounds = 0;
  // Optional fixed rotations applied to the starting frames (basis-invariance
  // checks); identity when empty.
};

// Sweep the boundary of {Re >= 0, delta <= |lambda| <= radius} counter-
// clockwise with transported frames, refining until argument increments are
// below max_arg_jump (or the round budget is hit).
// `rot_left` / `rot_right`, when given, right-multiply the starting frames
// (must be k x k unitary); E scales by their determinants, winding does not.
EvansContourResult evans_contour(const EvansSystem& sys, const ContourSpec& spec,
                                 const IntegratorConfig& integ = {1e-8, 1e-10},
                                 const Eigen::MatrixXcd* rot_left = nullptr,
                                 const Eigen::MatrixXcd* rot_right = nullptr);

// The front eigenvalue problem as an EvansSystem: M from the profile and
// weight, limit clusters from the block projectors.  The profile is copied
// into the returned closures.
EvansSystem front_system(const WaveProfile& prof, const WeightSpec& weight,
                         double half_length = 50.0);

// Full no-unstable-point-spectrum verdict for a front: contour at the energy
// bound radius with delta = 1e-3, pass iff winding == 0, closure residual
// < 0.1, and the splitting dims stayed consistent.
struct AssumptionVerdict {
  long winding = 0;
  double closure_residual = 0.0;
  double radius = 0.0, delta = 0.0;
  bool dims_consistent = true;
  bool pass = false;
  EvansContourResult contour;
};
AssumptionVerdict check_assumption_region(const WaveProfile& prof, const WeightSpec& weight,
                                          const IntegratorConfig& integ = {1e-8, 1e-10});

}  // namespace fw
