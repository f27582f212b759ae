// Model-layer checks: the wave ODE fields, admissibility, the rest-state
// linearization (cross-checked against an independent finite-difference
// Jacobian eigendecomposed by Eigen), and the far-field rate formulas.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "frontwave/model.hpp"

namespace {

// Jacobian of the wave field at a point, by central differences.  This is the
// oracle side: it knows nothing about the closed-form spectrum.
Eigen::Matrix4d fd_jacobian(const fw::WaveState& y0, const fw::ModelParams& p) {
  Eigen::Matrix4d J;
  const double h = 1e-6;
  for (int j = 0; j < 4; ++j) {
    fw::WaveState yp = y0, ym = y0;
    yp[j] += h;
    ym[j] -= h;
    const fw::WaveState fp = fw::wave_field(yp, p);
    const fw::WaveState fm = fw::wave_field(ym, p);
    for (int i = 0; i < 4; ++i) J(i, j) = (fp[i] - fm[i]) / (2.0 * h);
  }
  return J;
}

}  // namespace

TEST_CASE("admissibility window in d") {
  fw::ModelParams p{2.0, 0.3, 1.0};
  double limit = 0.0;
  CHECK(fw::admissible(p, &limit));
  // binding bound at (c, r) = (2, 1): min{1, 3, 1} = 1
  CHECK(limit == doctest::Approx(1.0));

  p.d = 0.9999;
  CHECK(fw::admissible(p));
  p.d = 1.0;
  CHECK_FALSE(fw::admissible(p));  // strict
  p.d = 0.0;
  CHECK_FALSE(fw::admissible(p));  // strict at the bottom too

  // r large enough that c^2 / (2 (r+1)) binds instead
  fw::ModelParams q{2.0, 0.49, 3.0};
  CHECK(fw::admissible(q, &limit));
  CHECK(limit == doctest::Approx(0.5));
  q.d = 0.5;
  CHECK_FALSE(fw::admissible(q));

  CHECK_THROWS_AS(fw::require_admissible(fw::ModelParams{2.0, 1.5, 1.0}), fw::ModelError);
  CHECK_NOTHROW(fw::require_admissible(fw::ModelParams{2.0, 0.3, 1.0}));
}

TEST_CASE("reduced field is the slaved restriction of the full field") {
  const fw::ModelParams p{2.0, 0.3, 1.0};
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), ap = u(rng), i = u(rng);
    const double ip = fw::slaved_i_prime(a, i, p);

    // On the slaving manifold the stiff row vanishes identically...
    const fw::WaveState f = fw::wave_field({a, ap, i, ip}, p);
    CHECK(std::abs(f[3]) < 1e-12);

    // ...and the remaining rows agree with the reduced field.
    const fw::ReducedState fr = fw::reduced_wave_field({a, ap, i}, p);
    CHECK(f[0] == doctest::Approx(fr[0]).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(fr[1]).epsilon(1e-14));
    CHECK(f[2] == doctest::Approx(fr[2]).epsilon(1e-14));
    CHECK(fr[2] == doctest::Approx(ip).epsilon(1e-14));
  }
}

TEST_CASE("rest-state spectrum: closed forms, Vieta, and an eigensolver oracle") {
  const fw::ModelParams p{2.0, 0.3, 1.0};
  const double K = 1.954;
  const auto spec = fw::rest_state_spectrum(K, p);

  const auto l1 = spec.eigenvalues[0];
  const auto l2 = spec.eigenvalues[1];
  const auto l3 = spec.eigenvalues[2];
  const auto l4 = spec.eigenvalues[3];

  CHECK(std::abs(l1) < 1e-14);
  CHECK(l2.real() == doctest::Approx(-p.c / p.d).epsilon(1e-14));
  CHECK(std::abs(l2.imag()) < 1e-14);

  // The quadratic factor mu^2 + c mu - (K - 1) ties l3, l4 together:
  CHECK(std::abs(l3 + l4 - std::complex<double>(-p.c)) < 1e-12);
  CHECK(std::abs(l3 * l4 - std::complex<double>(-(K - 1.0))) < 1e-12);
  CHECK_FALSE(spec.spiraling);
  CHECK(l3.real() < l4.real());
  CHECK(l4.real() > 0.0);  // K > 1: one unstable direction

  // Oracle: eigendecompose the finite-difference Jacobian at the rest state.
  const Eigen::Matrix4d J = fd_jacobian({0.0, 0.0, K, 0.0}, p);
  Eigen::EigenSolver<Eigen::Matrix4d> es(J);
  std::array<std::complex<double>, 4> got;
  for (int k = 0; k < 4; ++k) got[k] = es.eigenvalues()(k);
  auto by_real = [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  };
  std::sort(got.begin(), got.end(), by_real);
  std::array<std::complex<double>, 4> want{l2, l3, l1, l4};  // ascending real part
  for (int k = 0; k < 4; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-5);

  // The stored eigenvectors really are eigenvectors of that Jacobian.
  for (int k = 0; k < 4; ++k) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 4; ++i) v(i) = spec.eigenvectors[k][i];
    const double residual = (J.cast<std::complex<double>>() * v - spec.eigenvalues[k] * v)
                                .cwiseAbs()
                                .maxCoeff();
    CHECK(residual < 1e-5);
    CHECK(v.norm() > 0.1);  // nontrivial
  }
}

TEST_CASE("spiraling flag for K below the focus threshold") {
  const fw::ModelParams p{0.5, 0.2, 0.0};
  // 1 - c^2/4 = 0.9375; K below it makes l3, l4 a complex pair.
  const auto spec = fw::rest_state_spectrum(0.5, p);
  CHECK(spec.spiraling);
  CHECK(spec.eigenvalues[2].imag() != 0.0);
  CHECK(spec.eigenvalues[3] == std::conj(spec.eigenvalues[2]));

  // Degenerate K values are rejected.
  CHECK_THROWS_AS(fw::rest_state_spectrum(1.0, p), fw::ModelError);
  CHECK_THROWS_AS(fw::rest_state_spectrum(0.9375, p), fw::ModelError);
}

TEST_CASE("unstable direction: normalized, correctly signed, and an eigenvector") {
  const fw::ModelParams p{2.0, 0.3, 1.0};
  const double K = 1.954;
  const fw::WaveState u = fw::unstable_direction(K, p);

  double norm2 = 0.0;
  for (double ui : u) norm2 += ui * ui;
  CHECK(norm2 == doctest::Approx(1.0).epsilon(1e-12));

  CHECK(u[0] > 0.0);  // leaves toward positive activity
  CHECK(u[1] > 0.0);  // with growing a
  CHECK(u[2] < 0.0);  // eating into the inactive level
  CHECK(u[3] < 0.0);

  const double l4 = -p.c / 2.0 + std::sqrt(p.c * p.c / 4.0 + K - 1.0);
  const Eigen::Matrix4d J = fd_jacobian({0.0, 0.0, K, 0.0}, p);
  Eigen::Vector4d v(u[0], u[1], u[2], u[3]);
  CHECK((J * v - l4 * v).cwiseAbs().maxCoeff() < 1e-5);

  // Reduced counterpart points the same way in (a, a', i).
  const fw::ReducedState ur = fw::reduced_unstable_direction(K, p);
  CHECK(ur[0] > 0.0);
  CHECK(ur[1] / ur[0] == doctest::Approx(u[1] / u[0]).epsilon(1e-9));
}

TEST_CASE("far-field rate formulas and the critical-tail flag") {
  const fw::ModelParams p{2.0, 0.3, 1.0};
  const double K = 1.954;
  CHECK(fw::decay_rate_behind(K, p) ==
        doctest::Approx(-1.0 + std::sqrt(1.0 + K - 1.0)).epsilon(1e-14));
  CHECK(fw::decay_rate_ahead(0.3, p) ==
        doctest::Approx(1.0 - std::sqrt(1.0 + 0.3 - 1.0)).epsilon(1e-14));

  CHECK(fw::critical_tail(0.0, p));
  CHECK(fw::critical_tail(5e-7, p));        // within the default tolerance
  CHECK_FALSE(fw::critical_tail(0.2, p));
  CHECK(fw::critical_tail(0.2, p, 0.3));    // tolerance is honored
}
