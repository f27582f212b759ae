#include "frontwave/pde.hpp"

#include <algorithm>
#include <cmath>

namespace fw {
namespace {

// Second difference with mirror ghosts (homogeneous Neumann).
inline double d2(const std::vector<double>& F, size_t k, size_t n, double inv_dx2) {
  const double fm = (k == 0) ? F[1] : F[k - 1];
  const double fp = (k == n - 1) ? F[n - 2] : F[k + 1];
  return (fp - 2.0 * F[k] + fm) * inv_dx2;
}

// Transport + c F_x for a diffusing component: central difference.  Its
// truncation error is dispersive rather than diffusive; a first-order upwind
// stencil would add c dx / 2 of numerical diffusion, which shifts the
// selected speed of a pulled front by O(dx) and makes the comoving frame
// drift visibly.  The diffusion-limited Euler step keeps central transport
// stable (c^2 dt << 2 D here).
inline double dcen(const std::vector<double>& F, size_t k, size_t n, double inv_dx) {
  if (k == 0) return (F[1] - F[0]) * inv_dx;
  if (k == n - 1) return (F[n - 1] - F[n - 2]) * inv_dx;
  return (F[k + 1] - F[k - 1]) * (0.5 * inv_dx);
}

// Transport for a component with no diffusion of its own (central + Euler
// would be unconditionally unstable): first-order upwind.  The + c F_x term
// carries information leftward, so the stencil reaches right.
inline double dup(const std::vector<double>& F, size_t k, size_t n, double inv_dx) {
  const double fp = (k == n - 1) ? F[n - 1] : F[k + 1];
  return (fp - F[k]) * inv_dx;
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
    sxx += x[k] * x[k];
    sxy += x[k] * y[k];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

SimResult simulate(const SimConfig& cfg, const PdeState& init) {
  const Grid1D& g = cfg.grid;
  const size_t n = g.n();
  if (init.A.size() != n || init.I.size() != n) {
    throw PdeError("simulate: initial state size does not match the grid");
  }
  const ModelParams& p = cfg.params;
  if (p.d < 0.0) throw PdeError("simulate: d must be nonnegative");
  if (!(cfg.cfl > 0.0) || cfg.cfl > 1.0) {
    throw PdeError("simulate: cfl must lie in (0, 1]");
  }

  // Stable explicit step: diffusion and (if moving) advection limits.
  const double dmax = std::max(1.0, p.d);
  double dt_raw = cfg.cfl * g.dx * g.dx / (2.0 * dmax);
  if (cfg.moving_frame && p.c > 0.0) dt_raw = std::min(dt_raw, cfg.cfl * g.dx / p.c);
  const long n_sub = std::max(1L, static_cast<long>(std::ceil(cfg.dt_out / dt_raw)));
  const double dt = cfg.dt_out / static_cast<double>(n_sub);
  const long n_out = static_cast<long>(std::llround(cfg.t_end / cfg.dt_out));

  const double inv_dx2 = 1.0 / (g.dx * g.dx);
  const double inv_dx = 1.0 / g.dx;
  const double cc = cfg.moving_frame ? p.c : 0.0;

  SimResult out;
  out.dt = dt;
  PdeState s = init;
  s.t = 0.0;
  out.snapshots.push_back(s);
  out.min_A = *std::min_element(s.A.begin(), s.A.end());
  out.min_I = *std::min_element(s.I.begin(), s.I.end());

  std::vector<double> An(n), In(n);
  for (long block = 1; block <= n_out; ++block) {
    for (long sub = 0; sub < n_sub; ++sub) {
      for (size_t k = 0; k < n; ++k) {
        const double A = s.A[k], I = s.I[k];
        // In the moving frame, characteristics of + c d/dx enter from the
        // right: the last node is the inflow boundary and keeps its initial
        // (far-field) value.  A Neumann condition there would reflect the
        // outgoing profile and feed the linear instability of the rest state.
        if (cc > 0.0 && k == n - 1) {
          An[k] = A;
          In[k] = I;
          continue;
        }
        const double react = A * (A + I);
        double dA = d2(s.A, k, n, inv_dx2) + A - react;
        double dI = p.r * A + react;
        if (p.d > 0.0) dI += p.d * d2(s.I, k, n, inv_dx2);
        if (cc > 0.0) {
          dA += cc * dcen(s.A, k, n, inv_dx);
          dI += cc * (p.d > 0.0 ? dcen(s.I, k, n, inv_dx) : dup(s.I, k, n, inv_dx));
        }
        An[k] = A + dt * dA;
        In[k] = I + dt * dI;
      }
      s.A.swap(An);
      s.I.swap(In);
    }
    s.t = cfg.dt_out * static_cast<double>(block);
    double amax = 0.0;
    for (size_t k = 0; k < n; ++k) amax = std::max(amax, std::abs(s.A[k]));
    if (amax > cfg.blowup_threshold) {
      throw PdeError("simulate: |A| exceeded " + std::to_string(cfg.blowup_threshold) +
                     " at t = " + std::to_string(s.t));
    }
    out.min_A = std::min(out.min_A, *std::min_element(s.A.begin(), s.A.end()));
    out.min_I = std::min(out.min_I, *std::min_element(s.I.begin(), s.I.end()));
    out.snapshots.push_back(s);
  }
  return out;
}

PdeState gaussian_seed(const Grid1D& g, double amplitude, double center, double width) {
  const size_t n = g.n();
  PdeState s;
  s.A.resize(n);
  s.I.assign(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    const double z = (g.x_at(k) - center) / width;
    s.A[k] = amplitude * std::exp(-z * z);
  }
  return s;
}

PdeState front_state(const Grid1D& g, const WaveProfile& prof, double x_shift) {
  const size_t n = g.n();
  PdeState s;
  s.A.resize(n);
  s.I.resize(n);
  for (size_t k = 0; k < n; ++k) {
    const auto v = prof.eval(g.x_at(k) + x_shift);
    s.A[k] = v.a;
    s.I[k] = v.i;
  }
  return s;
}

void add_weighted_bump(PdeState& s, const Grid1D& g, const WeightSpec& w, double delta,
                       double center, double width) {
  for (size_t k = 0; k < s.A.size(); ++k) {
    const double x = g.x_at(k);
    const double u = (x - center) / width;
    s.A[k] += delta * weight_eval(w, x).w * std::exp(-u * u);
  }
}

std::optional<double> front_position(const Grid1D& g, const PdeState& s, double level) {
  const size_t n = g.n();
  for (size_t k = n - 1; k > 0; --k) {
    if (s.A[k - 1] >= level && s.A[k] < level) {
      // Linear interpolation of the crossing.
      const double x0 = g.x_at(k - 1), x1 = g.x_at(k);
      const double f0 = s.A[k - 1], f1 = s.A[k];
      return x0 + (level - f0) * (x1 - x0) / (f1 - f0);
    }
  }
  return std::nullopt;
}

std::optional<double> plateau_value(const Grid1D& g, const PdeState& s, double level) {
  const auto pos = front_position(g, s, level);
  if (!pos) return std::nullopt;
  const double lo = *pos - 30.0, hi = *pos - 20.0;
  double sum = 0.0;
  size_t cnt = 0;
  for (size_t k = 0; k < g.n(); ++k) {
    const double x = g.x_at(k);
    if (x >= lo && x <= hi) {
      sum += s.I[k];
      ++cnt;
    }
  }
  if (cnt == 0) return std::nullopt;
  return sum / static_cast<double>(cnt);
}

double fit_front_speed(const Grid1D& g, const std::vector<PdeState>& snaps, double t_lo,
                       double t_hi, double level) {
  std::vector<double> ts, xs;
  for (const auto& s : snaps) {
    if (s.t < t_lo - 1e-12 || s.t > t_hi + 1e-12) continue;
    const auto pos = front_position(g, s, level);
    if (pos) {
      ts.push_back(s.t);
      xs.push_back(*pos);
    }
  }
  if (ts.size() < 3) throw PdeError("fit_front_speed: too few trackable front positions");
  return lsq_slope(ts, xs);
}

double weighted_difference_norm(const Grid1D& g, const PdeState& a, const PdeState& b,
                                const WeightSpec& w, double window_lo, double window_hi) {
  double sup = 0.0;
  for (size_t k = 0; k < g.n(); ++k) {
    const double x = g.x_at(k);
    if (x < window_lo || x > window_hi) continue;
    const double num = std::abs(a.A[k] - b.A[k]) + std::abs(a.I[k] - b.I[k]);
    const double den = weight_eval(w, x).w * (1.0 + std::abs(x));
    sup = std::max(sup, num / den);
  }
  return sup;
}

double weighted_perturbation_norm(const Grid1D& g, const PdeState& s,
                                  const WaveProfile& prof, double x_shift,
                                  const WeightSpec& w, double window_lo,
                                  double window_hi) {
  double sup = 0.0;
  for (size_t k = 0; k < g.n(); ++k) {
    const double x = g.x_at(k);
    if (x < window_lo || x > window_hi) continue;
    const auto v = prof.eval(x + x_shift);
    const double num = std::abs(s.A[k] - v.a) + std::abs(s.I[k] - v.i);
    const double den = weight_eval(w, x).w * (1.0 + std::abs(x));
    sup = std::max(sup, num / den);
  }
  return sup;
}

double decay_exponent_fit(const std::vector<double>& ts, const std::vector<double>& norms,
                          double t_min) {
  std::vector<double> lt, ln;
  for (size_t k = 0; k < ts.size(); ++k) {
    if (ts[k] >= t_min && norms[k] > 0.0) {
      lt.push_back(std::log(1.0 + ts[k]));
      ln.push_back(std::log(norms[k]));
    }
  }
  if (lt.size() < 5) throw PdeError("decay_exponent_fit: need at least 5 usable samples");
  return lsq_slope(lt, ln);
}

}  // namespace fw
