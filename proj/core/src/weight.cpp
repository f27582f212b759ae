#include "frontwave/weight.hpp"

#include <cmath>

namespace fw {

void require_valid(const WeightSpec& s) {
  if (!(s.alpha_minus > 0.0) || s.alpha_minus > 1.0) {
    throw WeightError("WeightSpec: alpha_minus must lie in (0, 1], got " +
                      std::to_string(s.alpha_minus));
  }
  if (!(s.alpha_plus > 0.0)) {
    throw WeightError("WeightSpec: alpha_plus must be positive, got " +
                      std::to_string(s.alpha_plus));
  }
}

WeightValues weight_eval(const WeightSpec& s, double x) {
  // g(x) = log w(x) = -alpha(x) x with
  // alpha(x) = am + (ap - am) S(u), u = (x+1)/2 clamped to [0,1],
  // S(u) = 6u^5 - 15u^4 + 10u^3 (S', S'' vanish at both ends => alpha is C^2).
  const double am = s.alpha_minus, ap = s.alpha_plus;
  double alpha, dalpha, ddalpha;
  if (x <= -1.0) {
    alpha = am;
    dalpha = ddalpha = 0.0;
  } else if (x >= 1.0) {
    alpha = ap;
    dalpha = ddalpha = 0.0;
  } else {
    const double u = 0.5 * (x + 1.0);
    const double S = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    const double Sp = 30.0 * u * u * (u - 1.0) * (u - 1.0);
    const double Spp = 60.0 * u * (2.0 * u - 1.0) * (u - 1.0);
    alpha = am + (ap - am) * S;
    dalpha = (ap - am) * Sp * 0.5;    // du/dx = 1/2
    ddalpha = (ap - am) * Spp * 0.25;
  }
  const double g = -alpha * x;
  const double gp = -alpha - dalpha * x;
  const double gpp = -2.0 * dalpha - ddalpha * x;
  WeightValues v;
  v.log_w = g;
  v.w = std::exp(g);
  v.wp_over_w = gp;
  v.wpp_over_w = gpp + gp * gp;
  return v;
}

}  // namespace fw
