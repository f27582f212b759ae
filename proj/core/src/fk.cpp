#include "frontwave/fk.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace fw {

namespace {

constexpr int kChunks = 256;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, int chunk) {
  return splitmix64(splitmix64(seed) ^ splitmix64(0x5851f42d4c957f2dULL * (chunk + 1)));
}

// Runs `work(chunk, n_chunk, rng)` over a fixed set of RNG chunks and returns
// the per-chunk results in chunk order.  The partition and the per-chunk
// seeds depend only on (n_total, seed), so any thread count produces the
// same output.
template <class Result, class Work>
std::vector<Result> run_chunks(std::size_t n_total, std::uint64_t seed, int threads,
                               const Work& work) {
  const std::size_t base = n_total / kChunks;
  const std::size_t rem = n_total % kChunks;
  std::vector<Result> results(kChunks);

  auto run_one = [&](int c) {
    const std::size_t n_chunk = base + (static_cast<std::size_t>(c) < rem ? 1 : 0);
    std::mt19937_64 rng(chunk_seed(seed, c));
    results[c] = work(c, n_chunk, rng);
  };

  if (threads <= 1) {
    for (int c = 0; c < kChunks; ++c) run_one(c);
    return results;
  }

  std::atomic<int> next{0};
  auto drain = [&] {
    for (int c = next.fetch_add(1); c < kChunks; c = next.fetch_add(1)) run_one(c);
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min(threads, kChunks);
  pool.reserve(n_workers);
  for (int k = 0; k < n_workers; ++k) pool.emplace_back(drain);
  for (auto& th : pool) th.join();
  return results;
}

// One drifted-Brownian path, stepped until it reaches the origin or the
// horizon T.  Endpoint crossings are located by linear interpolation; a
// step that stays negative can still have crossed in between, which the
// Brownian bridge detects with probability exp(-2 x_k x_{k+1} / h).  Bridge
// crossings are assigned the mid-step time (bias O(dt), versus O(sqrt(dt))
// without the bridge).
PassageSample simulate_path(double x0, double drift, double dt, double horizon,
                            std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double x = x0;
  double t = 0.0;
  while (t < horizon) {
    const double h = std::min(dt, horizon - t);
    const double xn = x + drift * h + std::sqrt(h) * gauss(rng);
    if (xn >= 0.0) {
      const double frac = -x / (xn - x);
      return {true, t + frac * h, 0.0};
    }
    if (unif(rng) < std::exp(-2.0 * x * xn / h)) {
      return {true, t + 0.5 * h, 0.0};
    }
    x = xn;
    t += h;
  }
  return {false, horizon, x};
}

void require_passage_config(const PassageConfig& cfg) {
  if (!(cfg.x0 < 0.0)) throw FkError("first-passage start must satisfy x0 < 0");
  if (!(cfg.drift > 0.0)) throw FkError("first-passage drift must be positive");
  if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0)) throw FkError("dt and t_max must be positive");
  if (cfg.n_paths == 0) throw FkError("n_paths must be positive");
  if (cfg.threads < 1) throw FkError("threads must be >= 1");
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

struct MomentSums {
  double s1 = 0.0, s2 = 0.0;
  std::size_t n = 0;
};

double linear_fit_slope(const std::vector<double>& xs, const std::vector<double>& ys,
                        double* intercept) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  if (intercept) *intercept = my - slope * mx;
  return slope;
}

}  // namespace

std::vector<PassageSample> sample_first_passage(const PassageConfig& cfg) {
  require_passage_config(cfg);
  auto chunks = run_chunks<std::vector<PassageSample>>(
      cfg.n_paths, cfg.seed, cfg.threads,
      [&](int, std::size_t n_chunk, std::mt19937_64& rng) {
        std::vector<PassageSample> out;
        out.reserve(n_chunk);
        for (std::size_t k = 0; k < n_chunk; ++k) {
          out.push_back(simulate_path(cfg.x0, cfg.drift, cfg.dt, cfg.t_max, rng));
        }
        return out;
      });
  std::vector<PassageSample> all;
  all.reserve(cfg.n_paths);
  for (const auto& chunk : chunks) all.insert(all.end(), chunk.begin(), chunk.end());
  return all;
}

double hitting_time_density(double t, double x0, double drift) {
  if (!(x0 < 0.0)) throw FkError("hitting_time_density requires x0 < 0");
  if (!(t > 0.0)) return 0.0;
  const double a = -x0;
  const double z = a - drift * t;
  return a / std::sqrt(2.0 * M_PI * t * t * t) * std::exp(-z * z / (2.0 * t));
}

double hitting_time_cdf(double t, double x0, double drift, double quad_tol) {
  if (!(x0 < 0.0)) throw FkError("hitting_time_cdf requires x0 < 0");
  if (!(t > 0.0)) return 0.0;
  auto f = [&](double s) { return hitting_time_density(s, x0, drift); };
  return integrate(f, 0.0, t, quad_tol);
}

KsReport validate_hitting_density(const PassageConfig& cfg) {
  const auto samples = sample_first_passage(cfg);

  std::vector<double> hits;
  hits.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.crossed) hits.push_back(s.t0);
  }
  std::sort(hits.begin(), hits.end());

  KsReport rep;
  rep.n_used = hits.size();
  rep.censored_fraction =
      1.0 - static_cast<double>(hits.size()) / static_cast<double>(samples.size());
  rep.mean_expected = -cfg.x0 / cfg.drift;
  if (hits.empty()) {
    rep.threshold = 0.0;
    rep.pass = false;
    return rep;
  }
  rep.mean_t0 = std::accumulate(hits.begin(), hits.end(), 0.0) / hits.size();

  // Retained samples follow the hitting law conditioned on T0 <= t_max, so
  // the empirical CDF is compared against F(t) / F(t_max).  The CDF values
  // at the sorted sample points are accumulated piecewise to keep the
  // quadrature cost linear in the sample count.
  auto density = [&](double s) { return hitting_time_density(s, cfg.x0, cfg.drift); };
  const double total = integrate(density, 0.0, cfg.t_max, 1e-12);
  if (!(total > 0.0)) throw FkError("hitting-time law has no mass below the censor horizon");

  double stat = 0.0;
  double acc = 0.0;
  double prev = 0.0;
  const double m = static_cast<double>(hits.size());
  for (std::size_t k = 0; k < hits.size(); ++k) {
    acc += integrate(density, prev, hits[k], 1e-13);
    prev = hits[k];
    const double F = acc / total;
    stat = std::max(stat, std::abs(F - static_cast<double>(k) / m));
    stat = std::max(stat, std::abs(F - static_cast<double>(k + 1) / m));
  }

  rep.statistic = stat;
  rep.threshold = 3.0 * std::sqrt(std::log(2.0 / 0.01) / (2.0 * m));
  rep.pass = stat <= rep.threshold && rep.censored_fraction <= 0.01;
  return rep;
}

FkEstimate fk_solve(double t, double x0, const FkProblem& prob, const PassageConfig& cfg) {
  PassageConfig local = cfg;
  local.x0 = x0;
  require_passage_config(local);
  if (!(t > 0.0)) throw FkError("fk_solve requires t > 0");
  if (!prob.initial || !prob.boundary) {
    throw FkError("fk_solve requires both initial and boundary data");
  }

  // exp-growth factor accumulated over the stopped interval, and the source
  // term M * (e^{L tau} - 1) / L with its L -> 0 limit M * tau.
  auto source = [&](double tau) {
    if (std::abs(prob.L) < 1e-12) return prob.M * tau;
    return prob.M * std::expm1(prob.L * tau) / prob.L;
  };

  auto chunks = run_chunks<MomentSums>(
      local.n_paths, local.seed, local.threads,
      [&](int, std::size_t n_chunk, std::mt19937_64& rng) {
        MomentSums sums;
        for (std::size_t k = 0; k < n_chunk; ++k) {
          const PassageSample s = simulate_path(local.x0, local.drift, local.dt, t, rng);
          double v;
          if (s.crossed) {
            v = std::exp(prob.L * s.t0) * prob.boundary(t - s.t0) + source(s.t0);
          } else {
            v = std::exp(prob.L * t) * prob.initial(s.endpoint) + source(t);
          }
          sums.s1 += v;
          sums.s2 += v * v;
          ++sums.n;
        }
        return sums;
      });

  MomentSums total;
  for (const auto& c : chunks) {
    total.s1 += c.s1;
    total.s2 += c.s2;
    total.n += c.n;
  }
  const double n = static_cast<double>(total.n);
  FkEstimate est;
  est.n_paths = total.n;
  est.value = total.s1 / n;
  const double var = std::max(0.0, total.s2 / n - est.value * est.value);
  est.stderr_ = std::sqrt(var / n);
  return est;
}

TailReport tail_bound_check(const std::vector<TailSnapshot>& snaps, double delta,
                            double mu0, double drift) {
  if (snaps.empty()) throw FkError("tail_bound_check needs at least one snapshot");
  if (!(delta > 0.0) || !(mu0 > 0.0) || !(drift > 0.0)) {
    throw FkError("tail_bound_check needs delta, mu0, drift > 0");
  }
  for (const auto& s : snaps) {
    if (s.x.size() != s.A.size() || s.x.size() != s.I.size() || s.x.empty()) {
      throw FkError("tail_bound_check snapshot arrays are inconsistent");
    }
  }

  TailReport rep;
  const double c_tilde = drift / std::sqrt(2.0);
  rep.reference_exponents = {
      {"c_tilde", c_tilde},
      {"c_tilde/2", 0.5 * c_tilde},
      {"mu0/2", 0.5 * mu0},
      {"delta/(2 c_tilde)", delta / (2.0 * c_tilde)},
      {"delta/(2 c_tilde + mu0)", delta / (2.0 * c_tilde + mu0)},
  };

  auto fail = [&](std::string msg) {
    rep.preconditions_ok = false;
    rep.precondition_message = std::move(msg);
    rep.pass = false;
    return rep;
  };

  const TailSnapshot& init = snaps.front();
  if (std::abs(init.t) > 1e-9) return fail("first snapshot is not at t = 0");

  const double floor_level = 1.0 + delta - 1e-12;
  for (std::size_t k = 0; k < init.x.size(); ++k) {
    if (init.x[k] <= 0.0 && init.I[k] < floor_level) {
      std::ostringstream oss;
      oss << "initial inactive level " << init.I[k] << " at x = " << init.x[k]
          << " is below 1 + delta = " << 1.0 + delta;
      return fail(oss.str());
    }
  }
  for (const auto& s : snaps) {
    // inactive level at the interface, taken from the node nearest x = 0
    std::size_t k0 = 0;
    for (std::size_t k = 1; k < s.x.size(); ++k) {
      if (std::abs(s.x[k]) < std::abs(s.x[k0])) k0 = k;
    }
    if (s.I[k0] < floor_level) {
      std::ostringstream oss;
      oss << "inactive level " << s.I[k0] << " at the interface dropped below 1 + delta = "
          << 1.0 + delta << " at t = " << s.t;
      return fail(oss.str());
    }
  }
  rep.preconditions_ok = true;

  for (std::size_t k = 0; k < init.x.size(); ++k) {
    if (init.x[k] <= 0.0) {
      rep.K0 = std::max(rep.K0, init.A[k] * std::exp(-mu0 * init.x[k]));
    }
  }

  std::vector<double> xs, logs;
  for (const auto& s : snaps) {
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (s.x[k] <= 0.0 && s.A[k] > 1e-250) {
        xs.push_back(s.x[k]);
        logs.push_back(std::log(s.A[k]));
      }
    }
  }
  if (xs.size() < 8) return fail("too few positive activity samples at x <= 0 to fit a rate");

  rep.zeta_fit = linear_fit_slope(xs, logs, nullptr);
  double max_shift = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < xs.size(); ++k) {
    max_shift = std::max(max_shift, logs[k] - rep.zeta_fit * xs[k]);
  }
  rep.C_fit = std::exp(max_shift);
  rep.pass = rep.zeta_fit > 0.0;
  return rep;
}

}  // namespace fw
