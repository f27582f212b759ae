#include "frontwave/model.hpp"

#include <algorithm>
#include <cmath>

namespace fw {

WaveState wave_field(const WaveState& y, const ModelParams& p) {
  if (p.d <= 0.0) throw ModelError("wave_field: requires d > 0 (use the reduced system for d = 0)");
  const double a = y[0], b = y[1], i = y[2], j = y[3];
  return {b,
          a * (a + i) - a - p.c * b,
          j,
          -(p.c * j + p.r * a + a * (a + i)) / p.d};
}

ReducedState reduced_wave_field(const ReducedState& y, const ModelParams& p) {
  const double a = y[0], b = y[1], i = y[2];
  return {b,
          a * (a + i) - a - p.c * b,
          -a * (a + i + p.r) / p.c};
}

double slaved_i_prime(double a, double i, const ModelParams& p) {
  return -a * (a + i + p.r) / p.c;
}

bool admissible(const ModelParams& p, double* limit) {
  const double ub = std::min({1.0, 1.5 * p.c, p.c * p.c / (2.0 * (p.r + 1.0))});
  if (limit) *limit = ub;
  return p.d > 0.0 && p.d < ub && p.c > 0.0 && p.r >= 0.0;
}

void require_admissible(const ModelParams& p) {
  double ub = 0.0;
  if (!admissible(p, &ub)) {
    throw ModelError("parameters not admissible: need 0 < d < " + std::to_string(ub) +
                     " (= min{1, 3c/2, c^2/(2(r+1))}) with c > 0, r >= 0; got d = " +
                     std::to_string(p.d));
  }
}

RestStateSpectrum rest_state_spectrum(double K, const ModelParams& p) {
  if (p.d <= 0.0) throw ModelError("rest_state_spectrum: requires d > 0");
  const double disc = p.c * p.c / 4.0 + K - 1.0;
  if (std::abs(K - 1.0) < 1e-9 || std::abs(disc) < 1e-9) {
    throw ModelError("rest_state_spectrum: K at a bifurcation value (K = 1 or K = 1 - c^2/4), "
                     "linearization degenerates");
  }

  RestStateSpectrum s;
  const std::complex<double> root = std::sqrt(std::complex<double>(disc, 0.0));
  const std::complex<double> l3 = -p.c / 2.0 - root;
  const std::complex<double> l4 = -p.c / 2.0 + root;
  s.spiraling = disc < 0.0;
  s.eigenvalues = {std::complex<double>(0.0), std::complex<double>(-p.c / p.d), l3, l4};

  // Eigenvectors of the linearization
  //   J = [ 0      1    0   0
  //         K-1   -c    0   0
  //         0      0    0   1
  //        -(K+r)/d 0   0  -c/d ].
  // l1 = 0 and l2 = -c/d live in the (i, i') block; for l in {l3, l4} the
  // (a, a') pair is a genuine eigenpair of the upper block and the i-rows
  // follow from i'' = -(c i' + (K + r) a)/d, giving (up to scale)
  //   ( -c l - d l^2,  -c l^2 - d l^3,  K + r,  l (K + r) ).
  auto vec34 = [&](std::complex<double> l) -> std::array<std::complex<double>, 4> {
    return {-p.c * l - p.d * l * l,
            -p.c * l * l - p.d * l * l * l,
            std::complex<double>(K + p.r),
            l * (K + p.r)};
  };
  s.eigenvectors[0] = {0.0, 0.0, 1.0, 0.0};
  s.eigenvectors[1] = {0.0, 0.0, -p.d / p.c, 1.0};
  s.eigenvectors[2] = vec34(l3);
  s.eigenvectors[3] = vec34(l4);
  return s;
}

WaveState unstable_direction(double K, const ModelParams& p) {
  if (K <= 1.0) throw ModelError("unstable_direction: requires K > 1");
  const auto s = rest_state_spectrum(K, p);
  const double l4 = s.eigenvalues[3].real();  // real and positive for K > 1
  // Same eigenvector as in rest_state_spectrum, scaled so a > 0: negate.
  WaveState v = {p.c * l4 + p.d * l4 * l4,
                 p.c * l4 * l4 + p.d * l4 * l4 * l4,
                 -(K + p.r),
                 -l4 * (K + p.r)};
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

ReducedState reduced_unstable_direction(double K, const ModelParams& p) {
  if (K <= 1.0) throw ModelError("reduced_unstable_direction: requires K > 1");
  const double l4 = -p.c / 2.0 + std::sqrt(p.c * p.c / 4.0 + K - 1.0);
  ReducedState v = {1.0, l4, -(K + p.r) / (p.c * l4)};
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (double& x : v) x /= n;
  return v;
}

double decay_rate_behind(double K, const ModelParams& p) {
  if (K <= 1.0) throw ModelError("decay_rate_behind: requires K > 1");
  return -p.c / 2.0 + std::sqrt(p.c * p.c / 4.0 + K - 1.0);
}

double decay_rate_ahead(double i_plus, const ModelParams& p) {
  const double disc = p.c * p.c / 4.0 + i_plus - 1.0;
  if (disc < 0.0) throw ModelError("decay_rate_ahead: oscillatory leading edge (c^2/4 + i_plus < 1)");
  return p.c / 2.0 - std::sqrt(disc);
}

bool critical_tail(double i_plus, const ModelParams& p, double tol) {
  // The two spatial rates ahead are c/2 -/+ sqrt(c^2/4 + i_plus - 1); they
  // collide (double root, secular x e^{-cx/2} tail) exactly when the radicand
  // vanishes.  For the minimal-speed invasion front that is c = 2, i_plus = 0.
  return std::abs(p.c * p.c / 4.0 + i_plus - 1.0) < tol;
}

}  // namespace fw
