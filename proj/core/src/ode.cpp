#include "frontwave/ode.hpp"

#include <algorithm>
#include <cmath>

namespace fw {
namespace {

// Dormand-Prince 5(4) tableau (FSAL: stage 7 equals the next step's stage 1).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Error weights: 5th-order minus embedded 4th-order solution.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights for the quartic continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void DenseSegment::eval_theta(double th, std::vector<double>& y) const {
  const double th1 = 1.0 - th;
  y.resize(r1.size());
  for (size_t i = 0; i < r1.size(); ++i) {
    y[i] = r1[i] + th * (r2[i] + th1 * (r3[i] + th * (r4[i] + th1 * r5[i])));
  }
}

void DenseSegment::eval(double x, std::vector<double>& y) const {
  eval_theta((x - x0) / h, y);
}

void Trajectory::sample(double x, std::vector<double>& y) const {
  if (dense.empty()) throw OdeError("Trajectory::sample requires store_dense");
  // Dense segments are ordered by x0; binary-search the covering segment.
  auto it = std::upper_bound(dense.begin(), dense.end(), x,
                             [](double v, const DenseSegment& s) { return v < s.x0; });
  if (it != dense.begin()) --it;
  it->eval(x, y);
}

Trajectory integrate(const Field& f, double x0, double x1,
                     const std::vector<double>& y0,
                     const IntegratorConfig& cfg,
                     const std::vector<EventSpec>& events) {
  if (!(x1 > x0)) throw OdeError("integrate: requires x1 > x0");
  const size_t n = y0.size();
  Trajectory out;
  out.xs.push_back(x0);
  out.ys.push_back(y0);

  std::vector<double> y = y0, ynew(n), ytmp(n), yerr(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
  double x = x0;
  f(x, y, k1);

  // Initial step: crude curvature-free guess from the first derivative scale.
  double h = cfg.first_step;
  if (h <= 0.0) {
    const double dy = inf_norm(k1), yy = inf_norm(y);
    const double scale = cfg.abs_tol + cfg.rel_tol * std::max(yy, 1.0);
    h = (dy > 0.0) ? 0.01 * scale / (cfg.rel_tol * dy + 1e-300) : 1e-6;
    h = std::min({h, (x1 - x0) / 10.0, cfg.max_step});
    h = std::max(h, 1e-12);
  }

  // Previous-error memory for the PI controller.
  double err_old = 1.0;
  const double safety = 0.9, alpha = 0.7 / 5.0, beta = 0.4 / 5.0;
  const double facmin = 0.2, facmax = 5.0;

  std::vector<double> g_prev(events.size());
  for (size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].g(x, y);

  DenseSegment seg;
  std::vector<double> ymid(n);

  while (x < x1) {
    if (out.n_steps + out.n_rejected >= cfg.max_steps) {
      out.termination = Termination::StepLimit;
      return out;
    }
    h = std::min({h, cfg.max_step, x1 - x});
    if (h < 1e-14 * std::max(1.0, std::abs(x))) {
      out.termination = Termination::StepUnderflow;
      return out;
    }

    // Stages.
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    f(x + c2 * h, ytmp, k2);
    for (size_t i = 0; i < n; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    f(x + c3 * h, ytmp, k3);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    f(x + c4 * h, ytmp, k4);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    f(x + c5 * h, ytmp, k5);
    for (size_t i = 0; i < n; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                            a65 * k5[i]);
    f(x + h, ytmp, k6);
    for (size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    f(x + h, ynew, k7);

    // Scaled RMS error of the embedded pair.
    double err = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / static_cast<double>(n));

    if (err > 1.0) {
      ++out.n_rejected;
      const double fac = std::max(facmin, safety * std::pow(err, -0.2));
      h *= std::min(1.0, fac);
      continue;
    }

    // Accepted: build the dense interpolant for this step (always needed for
    // event location; stored only if requested).
    seg.x0 = x;
    seg.h = h;
    seg.r1 = y;
    seg.r2.resize(n);
    seg.r3.resize(n);
    seg.r4.resize(n);
    seg.r5.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const double dy = ynew[i] - y[i];
      seg.r2[i] = dy;
      seg.r3[i] = h * k1[i] - dy;
      seg.r4[i] = dy - h * k7[i] - seg.r3[i];
      seg.r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] +
                       d7 * k7[i]);
    }

    const double x_new = x + h;

    // Event scan over this step: endpoint sign changes, located by bisection
    // on the dense interpolant.  Hits are processed in x-order so a terminal
    // event cuts off anything after it.
    std::vector<std::pair<double, int>> hits;
    for (size_t e = 0; e < events.size(); ++e) {
      const double g0 = g_prev[e];
      const double g1 = events[e].g(x_new, ynew);
      g_prev[e] = g1;
      const bool crossed = (g0 < 0.0 && g1 >= 0.0) || (g0 > 0.0 && g1 <= 0.0) ||
                           (g0 == 0.0 && g1 != 0.0);
      if (!crossed) continue;
      const int dir = (g1 > g0) ? +1 : -1;
      if (events[e].direction != 0 && events[e].direction != dir) continue;
      double lo = x, hi = x_new, glo = g0;
      while (hi - lo > cfg.event_tol) {
        const double mid = 0.5 * (lo + hi);
        seg.eval(mid, ymid);
        const double gm = events[e].g(mid, ymid);
        if ((glo <= 0.0) == (gm <= 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      hits.emplace_back(0.5 * (lo + hi), static_cast<int>(e));
    }
    std::sort(hits.begin(), hits.end());

    for (const auto& [xe, ie] : hits) {
      seg.eval(xe, ymid);
      out.events.push_back(EventHit{ie, xe, ymid});
      if (events[ie].terminal) {
        // Truncate the accepted step at the event point.
        if (cfg.store_dense) out.dense.push_back(seg);
        out.xs.push_back(xe);
        out.ys.push_back(ymid);
        ++out.n_steps;
        out.termination = Termination::Event;
        return out;
      }
    }

    x = x_new;
    y.swap(ynew);
    k1.swap(k7);  // FSAL
    ++out.n_steps;
    out.xs.push_back(x);
    out.ys.push_back(y);
    if (cfg.store_dense) out.dense.push_back(seg);

    if (inf_norm(y) > cfg.divergence_radius) {
      out.termination = Termination::Diverged;
      return out;
    }

    // PI controller.
    const double fac =
        std::clamp(safety * std::pow(err, -alpha) * std::pow(err_old, beta), facmin, facmax);
    h *= fac;
    err_old = std::max(err, 1e-10);
  }

  out.termination = Termination::ReachedEnd;
  return out;
}

}  // namespace fw
