#include "frontwave/wave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fw {
namespace {

Field make_field(const ModelParams& p) {
  return [p](double, const std::vector<double>& y, std::vector<double>& dydx) {
    const WaveState s{y[0], y[1], y[2], y[3]};
    const WaveState f = wave_field(s, p);
    dydx.assign(f.begin(), f.end());
  };
}

// Least-squares slope of (x, y) pairs.
double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < n; ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

ShotResult shoot(double K, const ModelParams& p, const ShootConfig& cfg, bool dense) {
  require_admissible(p);
  if (K <= 1.0) throw ModelError("shoot: requires K > 1");

  ShotResult res;
  res.K = K;
  const WaveState dir = unstable_direction(K, p);
  std::vector<double> y0 = {cfg.epsilon * dir[0], cfg.epsilon * dir[1],
                            K + cfg.epsilon * dir[2], cfg.epsilon * dir[3]};

  IntegratorConfig ic = cfg.integ;
  ic.store_dense = dense;
  const Field f = make_field(p);

  // Phase 1: ride the unstable branch out of the rest state.  Near the fixed
  // point every norm is tiny, so outcome events stay off until the activity
  // reaches arm_level.
  EventSpec arm;
  arm.g = [&cfg](double, const std::vector<double>& y) { return y[0] - cfg.arm_level; };
  arm.terminal = true;
  arm.direction = +1;
  arm.name = "arm";
  res.escape = integrate(f, 0.0, cfg.span, y0, ic, {arm});
  if (res.escape.termination != Termination::Event) {
    res.outcome = ShotOutcome::Undecided;
    return res;
  }
  res.x_arm = res.escape.x_back();

  // Phase 2: the front excursion.  Decide between convergence to an
  // uninvaded state and loss of positivity.
  EventSpec conv;
  conv.g = [&cfg](double, const std::vector<double>& y) {
    return std::max({std::abs(y[0]), std::abs(y[1]), std::abs(y[3])}) - cfg.conv_tol;
  };
  conv.terminal = true;
  conv.direction = -1;
  conv.name = "converged";
  EventSpec neg;
  neg.g = [&cfg](double, const std::vector<double>& y) {
    return std::min(y[0], y[2]) + cfg.neg_tol;
  };
  neg.terminal = true;
  neg.direction = -1;
  neg.name = "negative";

  res.excursion = integrate(f, res.x_arm, res.x_arm + cfg.span, res.escape.back(), ic,
                            {conv, neg});
  res.x_end = res.excursion.x_back();
  const auto& ye = res.excursion.back();
  res.y_end = {ye[0], ye[1], ye[2], ye[3]};

  switch (res.excursion.termination) {
    case Termination::Event: {
      const int which = res.excursion.events.back().index;
      if (which == 0) {
        res.outcome = ShotOutcome::Converged;
        // One-step Richardson correction for the limit ahead: on the final
        // exponential approach i - i_plus ~ e^{-mu x}, so
        // i_plus = i - (i')^2 / i'' with i'' read off the vector field.
        const WaveState fe = wave_field(res.y_end, p);
        const double ipp = fe[3];
        res.i_plus = (std::abs(ipp) > 1e-300) ? res.y_end[2] - ye[3] * ye[3] / ipp
                                              : res.y_end[2];
      } else {
        res.outcome = ShotOutcome::WentNegative;
      }
      break;
    }
    case Termination::Diverged:
      res.outcome = ShotOutcome::Diverged;
      break;
    default:
      res.outcome = ShotOutcome::Undecided;
      break;
  }
  return res;
}

FrontResult find_invading_front(const ModelParams& p, double bracket_lo, double bracket_hi,
                                double k_tol, const ShootConfig& cfg) {
  FrontResult out;
  ShotResult lo = shoot(bracket_lo, p, cfg);
  ShotResult hi = shoot(bracket_hi, p, cfg);
  out.n_shots = 2;
  if (lo.outcome != ShotOutcome::Converged || lo.i_plus <= 0.0) {
    throw OdeError("find_invading_front: lower bracket K = " + std::to_string(bracket_lo) +
                   " does not produce a converged front with i_plus > 0");
  }
  if (hi.outcome != ShotOutcome::WentNegative &&
      !(hi.outcome == ShotOutcome::Converged && hi.i_plus < 0.0)) {
    throw OdeError("find_invading_front: upper bracket K = " + std::to_string(bracket_hi) +
                   " does not overshoot (expected loss of positivity)");
  }

  double a = bracket_lo, b = bracket_hi;
  while (b - a > k_tol) {
    const double mid = 0.5 * (a + b);
    ShotResult m = shoot(mid, p, cfg);
    ++out.n_shots;
    const bool low_side = (m.outcome == ShotOutcome::Converged && m.i_plus >= 0.0);
    const bool high_side =
        (m.outcome == ShotOutcome::WentNegative) ||
        (m.outcome == ShotOutcome::Converged && m.i_plus < 0.0);
    if (low_side) {
      a = mid;
      lo = std::move(m);
    } else if (high_side) {
      b = mid;
    } else {
      throw OdeError("find_invading_front: undecided shot at K = " + std::to_string(mid) +
                     " (outcome neither converged nor negative)");
    }
  }
  out.K_star = 0.5 * (a + b);
  out.uncertainty = 0.5 * (b - a);
  out.low = std::move(lo);
  return out;
}

WaveProfile::PointValues WaveProfile::eval(double x) const {
  PointValues v;
  const double xr = x_max();
  if (x >= x_min && x <= xr) {
    // Cubic Hermite from the bracketing nodes, using stored derivatives.
    size_t k = static_cast<size_t>((x - x_min) / dx);
    if (k >= a.size() - 1) k = a.size() - 2;
    const double t = (x - x_at(k)) / dx;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    const double h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t);
    const double h11 = t * t * (t - 1);
    // Derivatives of the basis functions (for a' of the interpolated a and
    // consistency of the returned ap/ipr with the stored derivative data we
    // interpolate value and derivative channels independently).
    v.a = h00 * a[k] + h10 * dx * ap[k] + h01 * a[k + 1] + h11 * dx * ap[k + 1];
    v.i = h00 * i[k] + h10 * dx * ipr[k] + h01 * i[k + 1] + h11 * dx * ipr[k + 1];
    // a' and i' channels: Hermite needs their derivatives; use the field-free
    // fallback of differentiating the value interpolants, which is exact to
    // the same order.
    const double g00 = (6 * t * t - 6 * t) / dx;
    const double g10 = 3 * t * t - 4 * t + 1;
    const double g01 = (6 * t - 6 * t * t) / dx;
    const double g11 = 3 * t * t - 2 * t;
    v.ap = g00 * a[k] + g10 * ap[k] + g01 * a[k + 1] + g11 * ap[k + 1];
    v.ipr = g00 * i[k] + g10 * ipr[k] + g01 * i[k + 1] + g11 * ipr[k + 1];
    return v;
  }
  if (x < x_min) {
    // Exponential approach to (0, 0, K, 0) at the linearized rate.
    const double e = std::exp(rate_behind * (x - x_min));
    v.a = a.front() * e;
    v.ap = ap.front() * e;
    v.i = K + (i.front() - K) * e;
    v.ipr = ipr.front() * e;
    return v;
  }
  // x > right end.
  const double s = x - xr;
  if (critical) {
    // Secular tail (p + q s) e^{-s} for both components.
    const double pa = a.back(), qa = ap.back() + a.back();
    const double pi_ = i.back() - i_plus, qi = ipr.back() + pi_;
    const double e = std::exp(-s);
    v.a = (pa + qa * s) * e;
    v.ap = (qa - pa - qa * s) * e;
    v.i = i_plus + (pi_ + qi * s) * e;
    v.ipr = (qi - pi_ - qi * s) * e;
  } else {
    const double e = std::exp(-rate_ahead * s);
    v.a = a.back() * e;
    v.ap = ap.back() * e;
    v.i = i_plus + (i.back() - i_plus) * e;
    v.ipr = ipr.back() * e;
  }
  return v;
}

WaveProfile build_profile(double K, const ModelParams& p, const ShootConfig& cfg,
                          const ProfileGridSpec& grid) {
  ShotResult shot = shoot(K, p, cfg, /*dense=*/true);
  if (shot.outcome != ShotOutcome::Converged) {
    throw OdeError("build_profile: shot at K = " + std::to_string(K) + " did not converge");
  }

  // Locate the activity maximum: the a' sign change (+ -> -) in the
  // excursion, refined by bisection on the dense interpolant.
  const Trajectory& exc = shot.excursion;
  size_t kmax = 0;
  bool found = false;
  for (size_t k = 0; k + 1 < exc.xs.size(); ++k) {
    if (exc.ys[k][1] > 0.0 && exc.ys[k + 1][1] <= 0.0) {
      kmax = k;
      found = true;
      break;
    }
  }
  if (!found) throw OdeError("build_profile: no activity maximum found along the excursion");
  double lo = exc.xs[kmax], hi = exc.xs[kmax + 1];
  std::vector<double> ytmp;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    exc.sample(mid, ytmp);
    (ytmp[1] > 0.0 ? lo : hi) = mid;
  }
  const double x_center = 0.5 * (lo + hi);

  WaveProfile prof;
  prof.params = p;
  prof.K = K;
  prof.i_plus = shot.i_plus;
  prof.critical = critical_tail(std::max(shot.i_plus, 0.0), p);
  prof.x_min = -grid.half_width;
  prof.dx = grid.dx;
  prof.rate_behind = decay_rate_behind(K, p);
  prof.rate_ahead = prof.critical
                        ? p.c / 2.0
                        : decay_rate_ahead(std::max(shot.i_plus, 0.0), p);
  prof.x_data_lo = shot.escape.xs.front() - x_center;
  prof.x_data_hi = shot.x_end - x_center;

  const size_t n = static_cast<size_t>(std::llround(2.0 * grid.half_width / grid.dx)) + 1;
  prof.a.resize(n);
  prof.ap.resize(n);
  prof.i.resize(n);
  prof.ipr.resize(n);

  // Right-tail anchor: the converged endpoint.
  const WaveState ye = shot.y_end;
  const double i_lim = std::max(shot.i_plus, 0.0);
  const double pa = ye[0], qa = ye[1] + ye[0];
  const double pi_ = ye[2] - i_lim, qi = ye[3] + pi_;
  const double mu_ahead = prof.rate_ahead;

  for (size_t k = 0; k < n; ++k) {
    const double xc = prof.x_min + grid.dx * static_cast<double>(k);  // centered coord
    const double xt = xc + x_center;                                  // trajectory coord
    if (xt < shot.escape.xs.front()) {
      // Analytic continuation into the rest state along the unstable mode.
      const auto& ystart = shot.escape.ys.front();
      const double e = std::exp(prof.rate_behind * (xt - shot.escape.xs.front()));
      prof.a[k] = ystart[0] * e;
      prof.ap[k] = ystart[1] * e;
      prof.i[k] = K + (ystart[2] - K) * e;
      prof.ipr[k] = ystart[3] * e;
    } else if (xt <= shot.x_arm) {
      shot.escape.sample(xt, ytmp);
      prof.a[k] = ytmp[0];
      prof.ap[k] = ytmp[1];
      prof.i[k] = ytmp[2];
      prof.ipr[k] = ytmp[3];
    } else if (xt <= shot.x_end) {
      exc.sample(xt, ytmp);
      prof.a[k] = ytmp[0];
      prof.ap[k] = ytmp[1];
      prof.i[k] = ytmp[2];
      prof.ipr[k] = ytmp[3];
    } else {
      const double s = xt - shot.x_end;
      if (prof.critical) {
        const double e = std::exp(-s);
        prof.a[k] = (pa + qa * s) * e;
        prof.ap[k] = (qa - pa - qa * s) * e;
        prof.i[k] = i_lim + (pi_ + qi * s) * e;
        prof.ipr[k] = (qi - pi_ - qi * s) * e;
      } else {
        const double e = std::exp(-mu_ahead * s);
        prof.a[k] = pa * e;
        prof.ap[k] = ye[1] * e;
        prof.i[k] = i_lim + pi_ * e;
        prof.ipr[k] = ye[3] * e;
      }
    }
  }
  return prof;
}

std::optional<double> inactive_level_crossing(const WaveProfile& prof, double level) {
  // i decreases from ~K to ~i_plus across the grid; bisect on the evaluator.
  double lo = prof.x_min, hi = prof.x_max();
  if (!(prof.eval(lo).i > level && prof.eval(hi).i < level)) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (prof.eval(mid).i > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

MassBalance mass_balance(const WaveProfile& prof) {
  // Composite Simpson over [-200, 200]: the evaluator's analytic tails make
  // the truncation error ~ e^{-60} on the left and e^{-150} on the right.
  const double L = 200.0, h = 0.05;
  const auto n = static_cast<size_t>(std::llround(2.0 * L / h));  // even
  auto f_a = [&](double x) { return prof.eval(x).a; };
  auto f_re = [&](double x) {
    const auto v = prof.eval(x);
    return v.a * (v.a + v.i);
  };
  double sa = f_a(-L) + f_a(L), sr = f_re(-L) + f_re(L);
  for (size_t k = 1; k < n; ++k) {
    const double x = -L + h * static_cast<double>(k);
    const double w = (k % 2 == 1) ? 4.0 : 2.0;
    sa += w * f_a(x);
    sr += w * f_re(x);
  }
  MassBalance mb;
  mb.int_a = sa * h / 3.0;
  mb.int_reaction = sr * h / 3.0;
  mb.flux_form =
      prof.params.c * (prof.K - std::max(prof.i_plus, 0.0)) / (1.0 + prof.params.r);
  mb.max_residual = std::max({std::abs(mb.int_a - mb.int_reaction),
                              std::abs(mb.int_a - mb.flux_form),
                              std::abs(mb.int_reaction - mb.flux_form)});
  return mb;
}

DecayRates measure_decay_rates(const WaveProfile& prof) {
  DecayRates dr;
  dr.critical = prof.critical;
  dr.behind_formula = decay_rate_behind(prof.K, prof.params);
  dr.ahead_formula = prof.critical
                         ? prof.params.c / 2.0
                         : decay_rate_ahead(std::max(prof.i_plus, 0.0), prof.params);

  // Behind: log a is affine in x where the front is still linear-regime.
  // Stay strictly inside the trajectory-backed extent.
  const double lo_b = std::max(prof.x_data_lo + 0.25, prof.x_min);
  const double hi_b = lo_b + 5.0;
  dr.window_behind[0] = lo_b;
  dr.window_behind[1] = hi_b;
  std::vector<double> xs, ls;
  for (double x = lo_b; x <= hi_b + 1e-12; x += 0.25) {
    const double av = prof.eval(x).a;
    if (av > 0.0) {
      xs.push_back(x);
      ls.push_back(std::log(av));
    }
  }
  dr.behind_fit = lsq_slope(xs, ls);  // positive: growth to the right

  // Ahead: fit |slope| of log a.  For the critical tail a ~ (x + x0) e^{-x}
  // the raw log-slope carries a ~1/x bias from the secular prefactor, so the
  // fit divides it out first (log(a/x) is affine up to O(x0/x^2)).
  double lo_a = 8.0, hi_a = std::min(prof.x_data_hi - 1.0, 20.0);
  if (hi_a - lo_a < 4.0) lo_a = std::max(2.0, hi_a - 6.0);
  dr.window_ahead[0] = lo_a;
  dr.window_ahead[1] = hi_a;
  xs.clear();
  ls.clear();
  for (double x = lo_a; x <= hi_a + 1e-12; x += 0.25) {
    const double av = prof.eval(x).a;
    if (av > 0.0) {
      xs.push_back(x);
      ls.push_back(prof.critical ? std::log(av / x) : std::log(av));
    }
  }
  dr.ahead_fit = -lsq_slope(xs, ls);  // decay rate magnitude
  return dr;
}

LimitRelation limit_relation_check(const WaveProfile& prof) {
  LimitRelation lr;
  const auto& p = prof.params;
  lr.sum = prof.K + std::max(prof.i_plus, 0.0);
  lr.lower = 2.0 - 2.0 * p.d * (p.r + 1.0) / (p.c * p.c);
  lr.lower_alt = 2.0 - 2.0 * p.d * (p.r + 1.0) / p.c;
  lr.upper = 2.0;
  lr.holds = (lr.sum > lr.lower) && (lr.sum < lr.upper);
  return lr;
}

FrontShapeChecks check_front_shape(const WaveProfile& prof) {
  FrontShapeChecks fc;
  fc.a_positive = true;
  fc.i_decreasing = true;
  fc.single_max = true;
  int sign_changes = 0;
  int prev_sign = +1;
  for (size_t k = 0; k < prof.size(); ++k) {
    const double x = prof.x_at(k);
    if (x < prof.x_data_lo || x > prof.x_data_hi) continue;
    if (prof.a[k] <= 0.0) fc.a_positive = false;
    if (prof.ipr[k] > 1e-9) fc.i_decreasing = false;
    const int s = (prof.ap[k] >= 0.0) ? +1 : -1;
    if (s != prev_sign) {
      ++sign_changes;
      prev_sign = s;
    }
  }
  fc.single_max = (sign_changes == 1);
  const auto at0 = prof.eval(0.0);
  fc.crowding_bound = (at0.a + at0.i <= 1.0 + 1e-6);
  return fc;
}

}  // namespace fw
