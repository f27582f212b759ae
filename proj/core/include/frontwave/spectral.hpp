#pragma once

// Spectral analysis of the front, in the exponentially weighted space where
// convective transport becomes genuine decay.  Perturbations (A~, I~) of the
// comoving PDE are written as w(x) (u, v); the eigenvalue problem for (u, v)
// is equivalent to a first-order system U' = M(x, lambda) U with
// U = (u, u', v, v').  Far from the front M(x, lambda) limits to constant
// matrices whose spatial eigenvalues split into growing and decaying clusters;
// the essential-spectrum curves are the lambda-loci where a rate crosses the
// imaginary axis, and the point spectrum inside a contour is counted by the
// winding of an Evans determinant (see evans.hpp).

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontwave/model.hpp"
#include "frontwave/wave.hpp"
#include "frontwave/weight.hpp"

namespace fw {

using cplx = std::complex<double>;

class SpectralError : public std::runtime_error {
 public:
  explicit SpectralError(const std::string& what) : std::runtime_error(what) {}
};

// M(x, lambda) for a computed front profile and weight.  Rows:
//   u'  = u'
//   u'' = (lambda + xi_u) u - (c + 2 w'/w) u' + a v
//   v'  = v'
//   v'' = [ -(2a + i + r) u + (lambda + xi_v) v - (c + 2 d w'/w) v' ] / d
// with xi_u = 2a + i - 1 - c w'/w - w''/w and xi_v = -a - c w'/w - d w''/w.
Eigen::Matrix4cd linearization_matrix(const WaveProfile& prof, const WeightSpec& weight,
                                      double x, cplx lambda);

// The constant-coefficient limit of M as x -> -inf (i -> i_inf = K) or
// x -> +inf (i -> i_inf = i_plus), with the corresponding weight rate alpha.
Eigen::Matrix4cd linearization_matrix_limit(const ModelParams& p, double alpha,
                                            double i_inf, cplx lambda);

// Spatial eigenvalues of the limit matrix.  The activity block contributes
//   alpha - c/2 +/- sqrt(c^2/4 - 1 + i_inf + lambda)
// and the inactive block
//   alpha + (1/d) (-c/2 +/- sqrt(c^2/4 + d lambda)),
// principal square roots throughout.
struct SpatialRates {
  cplx activity_plus, activity_minus;
  cplx inactive_plus, inactive_minus;
};
SpatialRates spatial_rates(const ModelParams& p, double alpha, double i_inf, cplx lambda);

// Spectral cluster of a limit matrix: the projector onto the span of the
// selected rates (one per block), the sum of those rates (used to normalize
// exponential growth), and the unstable/stable dimension count at this lambda.
struct LimitSplit {
  Eigen::Matrix4cd projector;
  cplx rate_sum = 0.0;
  int dim = 0;              // size of the selected cluster (2 when consistent)
  SpatialRates rates;
};
// Growing-as-x-increases cluster of the x -> -inf limit (the modes a front
// eigenfunction must leave along), and decaying cluster of the x -> +inf
// limit (the modes it must land on).
LimitSplit unstable_split_behind(const ModelParams& p, double alpha, double i_inf,
                                 cplx lambda);
LimitSplit stable_split_ahead(const ModelParams& p, double alpha, double i_inf,
                              cplx lambda);

// ---------------------------------------------------------------------------
// Essential-spectrum curves.
//
// Four families, one per (side, block) pair.  Each curve is the locus where
// the block's "+" rate crosses the imaginary axis; with beta = c/2 - alpha
// (activity) and gamma = c/2 - d alpha (inactive) the closed forms are
//   activity:  Re l = beta^2 + 1 - c^2/4 - i_inf - (Im l)^2 / (4 beta^2)
//   inactive:  Re l = (gamma^2 - c^2/4)/d - d (Im l)^2 / (4 gamma^2)
// For beta = 0 (critical weight ahead) the activity curve degenerates to the
// real half-line Re l <= 1 - c^2/4 - i_inf.
enum class CurveFamily { AheadActivity, AheadInactive, BehindActivity, BehindInactive };
const char* curve_family_name(CurveFamily f);

struct SpectrumCurve {
  CurveFamily family{};
  std::vector<cplx> points;       // root-found samples (or half-line samples)
  double max_real = 0.0;          // rightmost extent of the family
  bool half_line = false;         // degenerate (beta = 0) case
  double closed_form_discrepancy = 0.0;  // max |root-found - closed-form| Re
};

struct EssentialSpectrum {
  std::array<SpectrumCurve, 4> curves;
  double right_edge = 0.0;  // max of the four max_real values
};

struct CurveGrid {
  double im_max = 10.0;
  int n = 201;  // samples per curve, symmetric in Im lambda
};

// i_minus / i_plus are the inactive limits of the front under study (i_plus
// is clamped at 0 for critical fronts).  Throws SpectralError if the weight
// cannot stabilize the rear side (requires alpha_minus < c/2, i.e. < 1 at
// the minimal speed: larger rates overstabilize and the splitting flips).
EssentialSpectrum essential_spectrum_curves(const ModelParams& p, const WeightSpec& weight,
                                            double i_minus, double i_plus,
                                            const CurveGrid& grid = {});

// ---------------------------------------------------------------------------
// A-priori bound on unstable point spectrum.
//
// General energy estimate for a weighted reaction-diffusion system with
// diffusivities D_i, first-order coefficients c_i and zeroth-order bounds M_i:
//   Re lambda <= max M_i,   |Im lambda| <= max( c_i sqrt(M_i / D_i) + M_i ),
// giving |lambda| <= sqrt(2) max(Re bound, Im bound).
struct EnergyBound {
  double re_bound = 0.0;
  double im_bound = 0.0;
  double radius = 0.0;
};
EnergyBound energy_bound_general(const std::vector<double>& D,
                                 const std::vector<double>& drift,
                                 const std::vector<double>& M);

// Specialization to the critical front in the w = e^{-x} weight, where the
// coefficient bounds are (M_a, M_i) = (3, 5 + r) with drifts (0, 2 - 2d):
//   R = sqrt(2) [ (2 - 2d) sqrt((5 + r)/d) + 5 + r ].
// Requires c = 2 and d in (0, 1).
EnergyBound energy_bound(const ModelParams& p);

}  // namespace fw
