#include "frontwave/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fw {
namespace {

// Principal square root, kept as a named helper so every spectral formula
// uses the same branch.
cplx psqrt(cplx z) { return std::sqrt(z); }

// 2x2 companion-form blocks of the limit matrix.
Eigen::Matrix2cd activity_block(const ModelParams& p, double alpha, double i_inf,
                                cplx lambda) {
  // xi_u at the limit: i_inf - 1 + c alpha - alpha^2  (w'/w = -alpha).
  const double xi = i_inf - 1.0 + p.c * alpha - alpha * alpha;
  Eigen::Matrix2cd A;
  A(0, 0) = 0.0;
  A(0, 1) = 1.0;
  A(1, 0) = lambda + xi;
  A(1, 1) = -(p.c - 2.0 * alpha);
  return A;
}

Eigen::Matrix2cd inactive_block(const ModelParams& p, double alpha, cplx lambda) {
  const double xi = p.c * alpha - p.d * alpha * alpha;
  Eigen::Matrix2cd D;
  D(0, 0) = 0.0;
  D(0, 1) = 1.0;
  D(1, 0) = (lambda + xi) / p.d;
  D(1, 1) = -(p.c - 2.0 * p.d * alpha) / p.d;
  return D;
}

Eigen::Matrix2cd coupling_block(const ModelParams& p, double i_inf) {
  Eigen::Matrix2cd C = Eigen::Matrix2cd::Zero();
  C(1, 0) = -(i_inf + p.r) / p.d;
  return C;
}

// Rank-1 spectral projector of a 2x2 matrix onto the eigenvalue mu, the other
// eigenvalue being nu: P = (B - nu I) / (mu - nu).
Eigen::Matrix2cd projector2(const Eigen::Matrix2cd& B, cplx mu, cplx nu) {
  return (B - nu * Eigen::Matrix2cd::Identity()) / (mu - nu);
}

// Spectral projector of the block-lower-triangular limit matrix
// [[A, 0], [C, D]] onto the invariant subspace spanned by one eigenvalue of A
// (mu_a) and one of D (mu_d).  The resolvent residue calculus gives
//   P = [[P_A, 0], [Q, P_D]],
//   Q = (mu_a I - D)^{-1} C P_A + P_D C (mu_d I - A)^{-1}.
// The two terms of Q have poles where mu_a meets an eigenvalue of D, but the
// singular parts cancel: the sum stays analytic through the collision of the
// selected rates, which is what makes this continuation safe where
// eigenvector bases degenerate.
Eigen::Matrix4cd block_projector(const Eigen::Matrix2cd& A, const Eigen::Matrix2cd& D,
                                 const Eigen::Matrix2cd& C, cplx mu_a, cplx nu_a,
                                 cplx mu_d, cplx nu_d) {
  const Eigen::Matrix2cd Pa = projector2(A, mu_a, nu_a);
  const Eigen::Matrix2cd Pd = projector2(D, mu_d, nu_d);
  const Eigen::Matrix2cd Ra = (mu_a * Eigen::Matrix2cd::Identity() - D).inverse();
  const Eigen::Matrix2cd Rd = (mu_d * Eigen::Matrix2cd::Identity() - A).inverse();
  const Eigen::Matrix2cd Q = Ra * C * Pa + Pd * C * Rd;
  Eigen::Matrix4cd P = Eigen::Matrix4cd::Zero();
  P.topLeftCorner<2, 2>() = Pa;
  P.bottomLeftCorner<2, 2>() = Q;
  P.bottomRightCorner<2, 2>() = Pd;
  return P;
}

int count_unstable(const SpatialRates& r) {
  int k = 0;
  for (cplx mu : {r.activity_plus, r.activity_minus, r.inactive_plus, r.inactive_minus}) {
    if (mu.real() > 0.0) ++k;
  }
  return k;
}

}  // namespace

Eigen::Matrix4cd linearization_matrix(const WaveProfile& prof, const WeightSpec& weight,
                                      double x, cplx lambda) {
  const auto pv = prof.eval(x);
  const auto wv = weight_eval(weight, x);
  const auto& p = prof.params;
  const double a = pv.a, i = pv.i;
  const double gp = wv.wp_over_w, gpp = wv.wpp_over_w;
  const double xi_u = 2.0 * a + i - 1.0 - p.c * gp - gpp;
  const double xi_v = -a - p.c * gp - p.d * gpp;

  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M(0, 1) = 1.0;
  M(1, 0) = lambda + xi_u;
  M(1, 1) = -(p.c + 2.0 * gp);
  M(1, 2) = a;
  M(2, 3) = 1.0;
  M(3, 0) = -(2.0 * a + i + p.r) / p.d;
  M(3, 2) = (lambda + xi_v) / p.d;
  M(3, 3) = -(p.c + 2.0 * p.d * gp) / p.d;
  return M;
}

Eigen::Matrix4cd linearization_matrix_limit(const ModelParams& p, double alpha,
                                            double i_inf, cplx lambda) {
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  M.topLeftCorner<2, 2>() = activity_block(p, alpha, i_inf, lambda);
  M.bottomLeftCorner<2, 2>() = coupling_block(p, i_inf);
  M.bottomRightCorner<2, 2>() = inactive_block(p, alpha, lambda);
  return M;
}

SpatialRates spatial_rates(const ModelParams& p, double alpha, double i_inf, cplx lambda) {
  SpatialRates r;
  const cplx ra = psqrt(p.c * p.c / 4.0 - 1.0 + i_inf + lambda);
  r.activity_plus = alpha - p.c / 2.0 + ra;
  r.activity_minus = alpha - p.c / 2.0 - ra;
  const cplx ri = psqrt(p.c * p.c / 4.0 + p.d * lambda);
  r.inactive_plus = alpha + (-p.c / 2.0 + ri) / p.d;
  r.inactive_minus = alpha + (-p.c / 2.0 - ri) / p.d;
  return r;
}

LimitSplit unstable_split_behind(const ModelParams& p, double alpha, double i_inf,
                                 cplx lambda) {
  LimitSplit s;
  s.rates = spatial_rates(p, alpha, i_inf, lambda);
  s.dim = count_unstable(s.rates);
  s.rate_sum = s.rates.activity_plus + s.rates.inactive_plus;
  s.projector = block_projector(activity_block(p, alpha, i_inf, lambda),
                                inactive_block(p, alpha, lambda),
                                coupling_block(p, i_inf),
                                s.rates.activity_plus, s.rates.activity_minus,
                                s.rates.inactive_plus, s.rates.inactive_minus);
  return s;
}

LimitSplit stable_split_ahead(const ModelParams& p, double alpha, double i_inf,
                              cplx lambda) {
  LimitSplit s;
  s.rates = spatial_rates(p, alpha, i_inf, lambda);
  s.dim = 4 - count_unstable(s.rates);
  s.rate_sum = s.rates.activity_minus + s.rates.inactive_minus;
  s.projector = block_projector(activity_block(p, alpha, i_inf, lambda),
                                inactive_block(p, alpha, lambda),
                                coupling_block(p, i_inf),
                                s.rates.activity_minus, s.rates.activity_plus,
                                s.rates.inactive_minus, s.rates.inactive_plus);
  return s;
}

const char* curve_family_name(CurveFamily f) {
  switch (f) {
    case CurveFamily::AheadActivity: return "ahead-activity";
    case CurveFamily::AheadInactive: return "ahead-inactive";
    case CurveFamily::BehindActivity: return "behind-activity";
    case CurveFamily::BehindInactive: return "behind-inactive";
  }
  return "?";
}

EssentialSpectrum essential_spectrum_curves(const ModelParams& p, const WeightSpec& weight,
                                            double i_minus, double i_plus,
                                            const CurveGrid& grid) {
  require_valid(weight);
  require_admissible(p);
  if (!(weight.alpha_minus < p.c / 2.0)) {
    throw SpectralError(
        "essential_spectrum_curves: alpha_minus < 1 required at the minimal speed "
        "(alpha_minus >= c/2 overstabilizes the rear state and flips its splitting)");
  }
  const double ip = std::max(i_plus, 0.0);

  struct FamilyDef {
    CurveFamily fam;
    bool activity;
    double alpha;
    double i_inf;
  };
  const FamilyDef defs[4] = {
      {CurveFamily::AheadActivity, true, weight.alpha_plus, ip},
      {CurveFamily::AheadInactive, false, weight.alpha_plus, ip},
      {CurveFamily::BehindActivity, true, weight.alpha_minus, i_minus},
      {CurveFamily::BehindInactive, false, weight.alpha_minus, i_minus},
  };

  EssentialSpectrum out;
  out.right_edge = -std::numeric_limits<double>::infinity();

  for (int fidx = 0; fidx < 4; ++fidx) {
    const FamilyDef& def = defs[fidx];
    SpectrumCurve curve;
    curve.family = def.fam;

    auto rate_plus = [&](cplx lambda) -> cplx {
      const SpatialRates r = spatial_rates(p, def.alpha, def.i_inf, lambda);
      return def.activity ? r.activity_plus : r.inactive_plus;
    };

    // Closed-form Re lambda of the crossing at a given Im lambda.
    const double beta = p.c / 2.0 - def.alpha;             // activity family
    const double gamma = p.c / 2.0 - p.d * def.alpha;      // inactive family
    auto closed_form = [&](double y) -> double {
      if (def.activity) {
        return beta * beta + 1.0 - p.c * p.c / 4.0 - def.i_inf - y * y / (4.0 * beta * beta);
      }
      return (gamma * gamma - p.c * p.c / 4.0) / p.d -
             p.d * y * y / (4.0 * gamma * gamma);
    };

    const bool degenerate = def.activity && std::abs(beta) < 1e-12;
    if (degenerate) {
      // The activity curve collapses to the real half-line
      // lambda <= 1 - c^2/4 - i_inf; sample it by the wavenumber
      // parametrization lambda = vertex - k^2 and verify Re rate = 0 there.
      curve.half_line = true;
      const double vertex = 1.0 - p.c * p.c / 4.0 - def.i_inf;
      curve.max_real = vertex;
      double max_disc = 0.0;
      for (int k = 0; k < grid.n; ++k) {
        const double kk = grid.im_max * static_cast<double>(k) /
                          static_cast<double>(grid.n - 1);
        const cplx lambda(vertex - kk * kk, 0.0);
        curve.points.push_back(lambda);
        max_disc = std::max(max_disc, std::abs(rate_plus(lambda).real()));
      }
      curve.closed_form_discrepancy = max_disc;
    } else {
      if (def.activity && beta < 0.0) {
        throw SpectralError("essential_spectrum_curves: negative beta for family " +
                            std::string(curve_family_name(def.fam)));
      }
      double max_disc = 0.0;
      curve.max_real = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < grid.n; ++k) {
        const double y = -grid.im_max +
                         2.0 * grid.im_max * static_cast<double>(k) /
                             static_cast<double>(grid.n - 1);
        const double x_cf = closed_form(y);
        // Re(rate) is strictly increasing in Re lambda; bisect around the
        // closed-form prediction.
        double lo = x_cf - 1.0, hi = x_cf + 1.0;
        if (rate_plus(cplx(lo, y)).real() > 0.0 || rate_plus(cplx(hi, y)).real() < 0.0) {
          throw SpectralError("essential_spectrum_curves: bracket failure for family " +
                              std::string(curve_family_name(def.fam)));
        }
        for (int it = 0; it < 100 && hi - lo > 1e-12; ++it) {
          const double mid = 0.5 * (lo + hi);
          (rate_plus(cplx(mid, y)).real() < 0.0 ? lo : hi) = mid;
        }
        const double x_root = 0.5 * (lo + hi);
        curve.points.emplace_back(x_root, y);
        curve.max_real = std::max(curve.max_real, x_root);
        max_disc = std::max(max_disc, std::abs(x_root - x_cf));
      }
      curve.closed_form_discrepancy = max_disc;
    }
    out.right_edge = std::max(out.right_edge, curve.max_real);
    out.curves[fidx] = std::move(curve);
  }
  return out;
}

EnergyBound energy_bound_general(const std::vector<double>& D,
                                 const std::vector<double>& drift,
                                 const std::vector<double>& M) {
  if (D.size() != drift.size() || D.size() != M.size() || D.empty()) {
    throw SpectralError("energy_bound_general: component lists must have equal nonzero size");
  }
  EnergyBound b;
  b.re_bound = *std::max_element(M.begin(), M.end());
  b.im_bound = 0.0;
  for (size_t k = 0; k < D.size(); ++k) {
    if (!(D[k] > 0.0)) throw SpectralError("energy_bound_general: diffusivities must be positive");
    b.im_bound = std::max(b.im_bound, std::abs(drift[k]) * std::sqrt(M[k] / D[k]) + M[k]);
  }
  b.radius = std::sqrt(2.0) * std::max(b.re_bound, b.im_bound);
  return b;
}

EnergyBound energy_bound(const ModelParams& p) {
  if (std::abs(p.c - 2.0) > 1e-12) {
    throw SpectralError("energy_bound: derived for the minimal-speed front (c = 2)");
  }
  if (!(p.d > 0.0 && p.d < 1.0)) {
    throw SpectralError("energy_bound: requires d in (0, 1)");
  }
  return energy_bound_general({1.0, p.d}, {0.0, 2.0 - 2.0 * p.d}, {3.0, 5.0 + p.r});
}

}  // namespace fw
