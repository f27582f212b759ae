#include "frontwave/evans.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fw {
namespace {

// Modified Gram-Schmidt.  Returns Q (n x k, orthonormal columns); log_det
// collects log det R = sum log of the positive diagonal norms (the complex
// off-diagonal entries do not enter the determinant).
Eigen::MatrixXcd mgs(Eigen::MatrixXcd F, cplx& log_det) {
  const auto k = F.cols();
  log_det = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index m = 0; m < j; ++m) {
      const cplx proj = F.col(m).adjoint() * F.col(j);
      F.col(j) -= proj * F.col(m);
    }
    const double nrm = F.col(j).norm();
    if (nrm < 1e-300) throw SpectralError("evans: frame column collapsed during MGS");
    log_det += std::log(nrm);
    F.col(j) /= nrm;
  }
  return F;
}

// Deterministic frame spanning the range of a rank-k projector, chosen by
// greedy column pivoting: each round takes the column with the largest
// residual after orthogonalization against the directions already picked.
// Plain largest-norm selection is not safe here: a rank-1 diagonal block of
// the projector contributes two proportional columns, and both can beat the
// independent ones, leaving a numerically rank-deficient frame.  Pivoting on
// residuals keeps the selection well conditioned whenever the projector has
// full numerical rank k.  P(conj lambda) = conj P(lambda) for our systems,
// so residual norms -- and with them the pivot order -- match under
// conjugation and E inherits exact conjugate symmetry.
Eigen::MatrixXcd canonical_frame(const Eigen::MatrixXcd& P, int k) {
  const auto n = P.rows();
  Eigen::MatrixXcd R = P;
  Eigen::MatrixXcd F(n, k);
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (int j = 0; j < k; ++j) {
    Eigen::Index pivot = -1;
    double best = -1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (used[static_cast<size_t>(c)]) continue;
      const double nrm = R.col(c).norm();
      if (nrm > best) {
        best = nrm;
        pivot = c;
      }
    }
    if (pivot < 0 || best < 1e-300) {
      throw SpectralError("evans: projector rank below requested frame dimension");
    }
    used[static_cast<size_t>(pivot)] = true;
    const Eigen::VectorXcd q = R.col(pivot) / best;
    F.col(j) = q;
    for (Eigen::Index c = 0; c < n; ++c) {
      if (!used[static_cast<size_t>(c)]) R.col(c) -= q * q.dot(R.col(c));
    }
  }
  cplx ignored;
  return mgs(F, ignored);
}

// One side's evolution: orthonormal frame Omega plus normalized radial
// log-determinant rho, integrated from the far end to x = 0.
struct SideResult {
  Eigen::MatrixXcd omega0;  // frame at x = 0
  cplx rho0;                // log det C(0) - g * (distance), C the triangular factor
};

SideResult evolve_side(const EvansSystem& sys, cplx lambda,
                       const Eigen::MatrixXcd& frame, cplx rate_sum, bool left,
                       const IntegratorConfig& integ) {
  const int n = sys.n;
  const auto k = frame.cols();
  cplx log_det_init;
  Eigen::MatrixXcd omega = mgs(frame, log_det_init);

  // Pack (Omega, rho) into a real state vector.
  const size_t nk = static_cast<size_t>(n) * static_cast<size_t>(k);
  std::vector<double> y0(2 * nk + 2);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (int rrow = 0; rrow < n; ++rrow) {
      const cplx z = omega(rrow, c);
      const size_t idx = static_cast<size_t>(c) * static_cast<size_t>(n) +
                         static_cast<size_t>(rrow);
      y0[2 * idx] = z.real();
      y0[2 * idx + 1] = z.imag();
    }
  }
  y0[2 * nk] = log_det_init.real();
  y0[2 * nk + 1] = log_det_init.imag();

  // For the left side we integrate x: x_left -> 0.  For the right side we
  // substitute s = x_right - x (so s runs 0 -> x_right) and negate the field.
  const double span = left ? -sys.x_left : sys.x_right;
  Eigen::MatrixXcd M(n, n), om(n, k), g(k, k), dom(n, k);
  Field f = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    const double x = left ? (sys.x_left + t) : (sys.x_right - t);
    sys.eval_m(x, lambda, M);
    for (Eigen::Index c = 0; c < k; ++c) {
      for (int rrow = 0; rrow < n; ++rrow) {
        const size_t idx = static_cast<size_t>(c) * static_cast<size_t>(n) +
                           static_cast<size_t>(rrow);
        om(rrow, c) = cplx(y[2 * idx], y[2 * idx + 1]);
      }
    }
    g = om.adjoint() * (M * om);
    dom = M * om - om * g;
    const cplx drho = g.trace() - rate_sum;
    dy.resize(y.size());
    const double sgn = left ? 1.0 : -1.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      for (int rrow = 0; rrow < n; ++rrow) {
        const size_t idx = static_cast<size_t>(c) * static_cast<size_t>(n) +
                           static_cast<size_t>(rrow);
        dy[2 * idx] = sgn * dom(rrow, c).real();
        dy[2 * idx + 1] = sgn * dom(rrow, c).imag();
      }
    }
    dy[2 * nk] = sgn * drho.real();
    dy[2 * nk + 1] = sgn * drho.imag();
  };

  Trajectory traj = integrate(f, 0.0, span, y0, integ);
  if (traj.termination != Termination::ReachedEnd) {
    throw SpectralError("evans: side integration did not reach x = 0");
  }
  SideResult res;
  res.omega0.resize(n, k);
  const auto& ye = traj.back();
  for (Eigen::Index c = 0; c < k; ++c) {
    for (int rrow = 0; rrow < n; ++rrow) {
      const size_t idx = static_cast<size_t>(c) * static_cast<size_t>(n) +
                         static_cast<size_t>(rrow);
      res.omega0(rrow, c) = cplx(ye[2 * idx], ye[2 * idx + 1]);
    }
  }
  res.rho0 = cplx(ye[2 * nk], ye[2 * nk + 1]);
  return res;
}

EvansSample evaluate_frames(const EvansSystem& sys, cplx lambda,
                            const Eigen::MatrixXcd& f_left, const Eigen::MatrixXcd& f_right,
                            cplx g_left, cplx g_right, int dim_left, int dim_right,
                            const IntegratorConfig& integ) {
  EvansSample s;
  s.lambda = lambda;
  s.dim_left = dim_left;
  s.dim_right = dim_right;
  const SideResult L = evolve_side(sys, lambda, f_left, g_left, true, integ);
  const SideResult R = evolve_side(sys, lambda, f_right, g_right, false, integ);
  Eigen::MatrixXcd full(sys.n, sys.n);
  full.leftCols(f_left.cols()) = L.omega0;
  full.rightCols(f_right.cols()) = R.omega0;
  const cplx det = full.determinant();
  s.value = det * std::exp(L.rho0 + R.rho0);
  return s;
}

}  // namespace

namespace {

void require_consistent(const EvansSystem& sys, const EvansSystem::Split& l,
                        const EvansSystem::Split& r, cplx lambda) {
  if (l.dim + r.dim != sys.n) {
    throw SpectralError("evans: consistent splitting violated at lambda = (" +
                        std::to_string(lambda.real()) + ", " + std::to_string(lambda.imag()) +
                        "): dims " + std::to_string(l.dim) + " + " + std::to_string(r.dim) +
                        " != " + std::to_string(sys.n));
  }
}

}  // namespace

EvansSample evans_point(const EvansSystem& sys, cplx lambda, const IntegratorConfig& integ) {
  const auto sl = sys.left(lambda);
  const auto sr = sys.right(lambda);
  require_consistent(sys, sl, sr, lambda);
  const Eigen::MatrixXcd fl = canonical_frame(sl.projector, sl.dim);
  const Eigen::MatrixXcd fr = canonical_frame(sr.projector, sr.dim);
  return evaluate_frames(sys, lambda, fl, fr, sl.rate_sum, sr.rate_sum, sl.dim, sr.dim,
                         integ);
}

EvansPatch evans_patch(const EvansSystem& sys, cplx lambda, double h,
                       const IntegratorConfig& integ) {
  EvansPatch patch;
  patch.h = h;
  const auto sl = sys.left(lambda);
  const auto sr = sys.right(lambda);
  require_consistent(sys, sl, sr, lambda);
  const Eigen::MatrixXcd fl = canonical_frame(sl.projector, sl.dim);
  const Eigen::MatrixXcd fr = canonical_frame(sr.projector, sr.dim);
  patch.center = evaluate_frames(sys, lambda, fl, fr, sl.rate_sum, sr.rate_sum, sl.dim,
                                 sr.dim, integ);

  auto shifted = [&](cplx l2) -> EvansSample {
    const auto sl2 = sys.left(l2);
    const auto sr2 = sys.right(l2);
    // Transport the center frames: projection keeps them analytic in l2.
    const Eigen::MatrixXcd fl2 = sl2.projector * fl;
    const Eigen::MatrixXcd fr2 = sr2.projector * fr;
    return evaluate_frames(sys, l2, fl2, fr2, sl2.rate_sum, sr2.rate_sum, sl2.dim,
                           sr2.dim, integ);
  };
  patch.re_plus = shifted(lambda + h);
  patch.re_minus = shifted(lambda - h);
  patch.im_plus = shifted(lambda + cplx(0.0, h));
  patch.im_minus = shifted(lambda - cplx(0.0, h));

  const cplx dre = (patch.re_plus.value - patch.re_minus.value) / (2.0 * h);
  const cplx dim_ = (patch.im_plus.value - patch.im_minus.value) / (2.0 * h);
  const cplx d_conj = 0.5 * (dre + cplx(0.0, 1.0) * dim_);
  const cplx d_hol = 0.5 * (dre - cplx(0.0, 1.0) * dim_);
  patch.cr_residual_rel = std::abs(d_conj) / std::max(std::abs(d_hol), 1e-300);
  return patch;
}

WindingResult winding_number(const std::vector<cplx>& values, bool closed) {
  if (values.size() < 2) throw SpectralError("winding_number: need at least two values");
  WindingResult w;
  double total = 0.0;
  const size_t n = values.size();
  const size_t m = closed ? n : n - 1;
  for (size_t j = 0; j < m; ++j) {
    const cplx a = values[j];
    const cplx b = values[(j + 1) % n];
    if (a == cplx(0.0) || b == cplx(0.0)) {
      throw SpectralError("winding_number: zero value on the path");
    }
    const double jump = std::arg(b / a);
    w.max_jump = std::max(w.max_jump, std::abs(jump));
    total += jump;
  }
  if (w.max_jump >= std::numbers::pi - 1e-12) {
    throw SpectralError("winding_number: argument jump reached pi; sampling too coarse");
  }
  w.winding = std::lround(total / (2.0 * std::numbers::pi));
  w.residual = std::abs(total - 2.0 * std::numbers::pi * static_cast<double>(w.winding));
  return w;
}

namespace {

// Boundary of {Re >= 0, delta <= |l| <= R}, positively oriented, as a
// piecewise map t in [0,1] -> lambda.  Pieces: outer arc (-i R -> +i R
// through +R), imaginary segment down to +i delta, inner arc (+i delta ->
// -i delta through +delta), imaginary segment down to -i R.
struct BoundaryPath {
  double delta, R;
  double len_arc_out, len_seg, len_arc_in, total;
  explicit BoundaryPath(double delta_, double R_) : delta(delta_), R(R_) {
    len_arc_out = std::numbers::pi * R;
    len_seg = R - delta;
    len_arc_in = std::numbers::pi * delta;
    total = len_arc_out + 2.0 * len_seg + len_arc_in;
  }
  cplx at(double t) const {
    double s = t * total;
    if (s <= len_arc_out) {
      const double th = -std::numbers::pi / 2.0 + std::numbers::pi * (s / len_arc_out);
      return R * cplx(std::cos(th), std::sin(th));
    }
    s -= len_arc_out;
    if (s <= len_seg) return cplx(0.0, R - s);
    s -= len_seg;
    if (s <= len_arc_in) {
      const double th = std::numbers::pi / 2.0 - std::numbers::pi * (s / len_arc_in);
      return delta * cplx(std::cos(th), std::sin(th));
    }
    s -= len_arc_in;
    return cplx(0.0, -(delta + s));
  }
  // Parameter values of the four corner points (piece boundaries).
  std::array<double, 4> corners() const {
    return {len_arc_out / total, (len_arc_out + len_seg) / total,
            (len_arc_out + len_seg + len_arc_in) / total, 1.0};
  }
};

}  // namespace

EvansContourResult evans_contour(const EvansSystem& sys, const ContourSpec& spec,
                                 const IntegratorConfig& integ,
                                 const Eigen::MatrixXcd* rot_left,
                                 const Eigen::MatrixXcd* rot_right) {
  const BoundaryPath path(spec.delta, spec.radius);

  // Initial parameter set: per-piece uniform samples (at least 17 each, so
  // the short inner arc is never under-resolved), plus the exact corners.
  std::vector<double> ts;
  {
    const std::array<double, 5> cuts = {0.0, path.corners()[0], path.corners()[1],
                                        path.corners()[2], 1.0};
    for (int piece = 0; piece < 4; ++piece) {
      const double t0 = cuts[static_cast<size_t>(piece)];
      const double t1 = cuts[static_cast<size_t>(piece) + 1];
      const double frac = (t1 - t0);
      int np = std::max(17, static_cast<int>(std::lround(spec.n_init * frac)));
      for (int j = 0; j < np; ++j) {
        ts.push_back(t0 + frac * static_cast<double>(j) / static_cast<double>(np));
      }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  }

  EvansContourResult out;
  for (int round = 0;; ++round) {
    out.refine_rounds = round;
    // Transported sweep: canonical frames at the first sample, projector
    // transport from then on.
    out.samples.clear();
    out.samples.reserve(ts.size());
    Eigen::MatrixXcd fl, fr;
    for (size_t j = 0; j < ts.size(); ++j) {
      const cplx lambda = path.at(ts[j]);
      const auto sl = sys.left(lambda);
      const auto sr = sys.right(lambda);
      require_consistent(sys, sl, sr, lambda);
      if (j == 0) {
        fl = canonical_frame(sl.projector, sl.dim);
        fr = canonical_frame(sr.projector, sr.dim);
        if (rot_left) fl = fl * (*rot_left);
        if (rot_right) fr = fr * (*rot_right);
      } else {
        fl = sl.projector * fl;
        fr = sr.projector * fr;
      }
      out.samples.push_back(evaluate_frames(sys, lambda, fl, fr, sl.rate_sum, sr.rate_sum,
                                            sl.dim, sr.dim, integ));
    }
    out.dims_consistent = true;  // require_consistent throws otherwise

    // Argument increments around the closed loop.
    std::vector<cplx> vals(out.samples.size());
    for (size_t j = 0; j < out.samples.size(); ++j) vals[j] = out.samples[j].value;
    double maxjump = 0.0;
    std::vector<size_t> refine;
    for (size_t j = 0; j < vals.size(); ++j) {
      const cplx a = vals[j];
      const cplx b = vals[(j + 1) % vals.size()];
      if (a == cplx(0.0) || b == cplx(0.0)) {
        throw SpectralError("evans_contour: zero value on the contour");
      }
      const double jump = std::abs(std::arg(b / a));
      maxjump = std::max(maxjump, jump);
      if (jump >= spec.max_arg_jump) refine.push_back(j);
    }
    out.max_arg_jump = maxjump;

    if (refine.empty() || round >= spec.max_refine_rounds) {
      const WindingResult w = winding_number(vals, /*closed=*/true);
      out.winding = w.winding;
      out.closure_residual = w.residual;
      out.min_abs = std::abs(vals[0]);
      for (const cplx& v : vals) out.min_abs = std::min(out.min_abs, std::abs(v));
      return out;
    }

    // Insert midpoints of every offending interval (in t) and re-sweep.
    std::vector<double> ts_new = ts;
    for (size_t j : refine) {
      const double t0 = ts[j];
      const double t1 = (j + 1 < ts.size()) ? ts[j + 1] : 1.0;
      ts_new.push_back(0.5 * (t0 + t1));
    }
    std::sort(ts_new.begin(), ts_new.end());
    ts_new.erase(std::unique(ts_new.begin(), ts_new.end()), ts_new.end());
    ts = std::move(ts_new);
  }
}

EvansSystem front_system(const WaveProfile& prof, const WeightSpec& weight,
                         double half_length) {
  require_valid(weight);
  auto shared = std::make_shared<WaveProfile>(prof);
  const ModelParams p = prof.params;
  const double i_minus = prof.K;
  const double i_plus = std::max(prof.i_plus, 0.0);
  const WeightSpec w = weight;

  EvansSystem sys;
  sys.n = 4;
  sys.x_left = -half_length;
  sys.x_right = half_length;
  sys.eval_m = [shared, w](double x, cplx lambda, Eigen::MatrixXcd& M) {
    M = linearization_matrix(*shared, w, x, lambda);
  };
  sys.left = [p, w, i_minus](cplx lambda) {
    const LimitSplit s = unstable_split_behind(p, w.alpha_minus, i_minus, lambda);
    return EvansSystem::Split{s.projector, s.rate_sum, s.dim};
  };
  sys.right = [p, w, i_plus](cplx lambda) {
    const LimitSplit s = stable_split_ahead(p, w.alpha_plus, i_plus, lambda);
    return EvansSystem::Split{s.projector, s.rate_sum, s.dim};
  };
  return sys;
}

AssumptionVerdict check_assumption_region(const WaveProfile& prof, const WeightSpec& weight,
                                          const IntegratorConfig& integ) {
  AssumptionVerdict v;
  const EnergyBound eb = energy_bound(prof.params);
  ContourSpec spec;
  spec.radius = eb.radius;
  v.radius = eb.radius;
  v.delta = spec.delta;
  const EvansSystem sys = front_system(prof, weight);
  v.contour = evans_contour(sys, spec, integ);
  v.winding = v.contour.winding;
  v.closure_residual = v.contour.closure_residual;
  v.dims_consistent = v.contour.dims_consistent;
  v.pass = (v.winding == 0) && (v.closure_residual < 0.1) && v.dims_consistent;
  return v;
}

}  // namespace fw
