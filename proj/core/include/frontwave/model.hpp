#pragma once

// Two-species invasion model and the traveling-wave ODE derived from it.
//
// The PDE system couples an active density A (diffusing, reproducing, and
// converting) with an inactive density I (optionally diffusing, fed by A):
//
//   dA/dt = A_xx + A - A (A + I)
//   dI/dt = d I_xx + r A + A (A + I)
//
// A front traveling left-to-right with speed c, written in the comoving
// coordinate, satisfies a 4-dimensional first-order ODE in (a, a', i, i').
// Fronts of interest connect the invaded rest state (a, i) = (0, K) far
// behind (x -> -inf) to an uninvaded state (0, i_plus) far ahead.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace fw {

struct ModelParams {
  double c = 2.0;  // frame speed
  double d = 0.3;  // inactive diffusivity, 0 <= d
  double r = 1.0;  // conversion-at-rest rate, r >= 0
};

// State of the full wave ODE: (a, a', i, i').
using WaveState = std::array<double, 4>;
// State of the reduced (d -> 0) wave ODE: (a, a', i).
using ReducedState = std::array<double, 3>;

// Thrown when parameters leave the regime the numerics are built for.
class ModelError : public std::domain_error {
 public:
  explicit ModelError(const std::string& what) : std::domain_error(what) {}
};

// Right-hand side of the full wave ODE:
//   a'' = a (a + i) - a - c a'
//   i'' = -(c i' + r a + a (a + i)) / d
// Requires d > 0.
WaveState wave_field(const WaveState& y, const ModelParams& p);

// Right-hand side of the reduced wave ODE (singular limit d -> 0, where i'
// is slaved to the other variables):
//   a'' = a (a + i) - a - c a'
//   i'  = -a (a + i + r) / c
ReducedState reduced_wave_field(const ReducedState& y, const ModelParams& p);

// Value of i' on the slaving manifold of the reduced system. Plugging this
// into wave_field makes the fast component (the i'' row) vanish identically.
double slaved_i_prime(double a, double i, const ModelParams& p);

// Admissibility of (c, d, r) for front construction:
//   0 < d < min{ 1, 3c/2, c^2 / (2 (r + 1)) }.
// Returns the binding upper bound through `limit` if given.
bool admissible(const ModelParams& p, double* limit = nullptr);
void require_admissible(const ModelParams& p);  // throws ModelError if not

// Spectrum of the wave ODE linearized at the invaded rest state
// (a, a', i, i') = (0, 0, K, 0).  The four eigenvalues are
//   l1 = 0,           l2 = -c/d,
//   l3 = -c/2 - sqrt(c^2/4 + K - 1),   l4 = -c/2 + sqrt(c^2/4 + K - 1),
// so for K > 1 the state is a saddle with the single unstable rate l4.
// For K < 1 - c^2/4 the pair l3, l4 is complex (spiraling approach); the
// struct flags that case.  K within 1e-9 of the bifurcation values 1 or
// 1 - c^2/4 is rejected (degenerate linearization).
struct RestStateSpectrum {
  std::array<std::complex<double>, 4> eigenvalues;  // ordered l1, l2, l3, l4
  std::array<std::array<std::complex<double>, 4>, 4> eigenvectors;  // columns
  bool spiraling = false;  // true iff l3, l4 form a complex pair
};
RestStateSpectrum rest_state_spectrum(double K, const ModelParams& p);

// Unit vector along the unstable eigendirection l4 at (0, 0, K, 0),
// oriented so the a-component is positive (the branch that enters a > 0).
// Requires K > 1.  Component signs are (+, +, -, -): the branch leaves the
// rest state with growing a and decreasing i.
WaveState unstable_direction(double K, const ModelParams& p);

// Unstable eigendirection of the reduced system at (0, 0, K): (1, l4, v_i)
// normalized, with v_i = -(K + r) / (c l4).
ReducedState reduced_unstable_direction(double K, const ModelParams& p);

// Far-field decay rates of an admissible front:
//   behind (x -> -inf): |a| ~ e^{ mu_minus x },  mu_minus = -c/2 + sqrt(c^2/4 + K - 1)
//   ahead  (x -> +inf): |a| ~ e^{ -mu_plus x },  mu_plus  =  c/2 - sqrt(c^2/4 + i_plus - 1)
// For the critical front (c = 2, i_plus = 0) the two leading rates ahead
// collide at 1 and the decay picks up the secular factor x e^{-x}.
double decay_rate_behind(double K, const ModelParams& p);
double decay_rate_ahead(double i_plus, const ModelParams& p);
bool critical_tail(double i_plus, const ModelParams& p, double tol = 1e-6);

}  // namespace fw
