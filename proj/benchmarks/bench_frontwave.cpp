#include <benchmark/benchmark.h>

#include "frontwave/evans.hpp"
#include "frontwave/pde.hpp"
#include "frontwave/wave.hpp"

namespace {

const fw::ModelParams kParams{2.0, 0.3, 1.0};

const fw::WaveProfile& profile() {
  static const fw::WaveProfile prof = [] {
    const auto front = fw::find_invading_front(kParams);
    return fw::build_profile(front.low.K, kParams);
  }();
  return prof;
}

void BM_IntegrateWaveField(benchmark::State& state) {
  const auto dir = fw::unstable_direction(1.9, kParams);
  fw::Field f = [](double, const std::vector<double>& y, std::vector<double>& dy) {
    const fw::WaveState s{y[0], y[1], y[2], y[3]};
    const fw::WaveState ds = fw::wave_field(s, kParams);
    std::copy(ds.begin(), ds.end(), dy.begin());
  };
  std::vector<double> y0 = {1e-7 * dir[0], 1e-7 * dir[1], 1.9 + 1e-7 * dir[2], 1e-7 * dir[3]};
  for (auto _ : state) {
    auto traj = fw::integrate(f, 0.0, 40.0, y0, {1e-10, 1e-14});
    benchmark::DoNotOptimize(traj.x_back());
  }
}
BENCHMARK(BM_IntegrateWaveField);

void BM_Shoot(benchmark::State& state) {
  for (auto _ : state) {
    auto shot = fw::shoot(1.9, kParams);
    benchmark::DoNotOptimize(shot.i_plus);
  }
}
BENCHMARK(BM_Shoot);

void BM_FindInvadingFront(benchmark::State& state) {
  for (auto _ : state) {
    auto front = fw::find_invading_front(kParams);
    benchmark::DoNotOptimize(front.K_star);
  }
}
BENCHMARK(BM_FindInvadingFront)->Unit(benchmark::kMillisecond);

void BM_EvansPoint(benchmark::State& state) {
  const auto sys = fw::front_system(profile(), fw::WeightSpec{1.0, 1.0});
  for (auto _ : state) {
    auto sample = fw::evans_point(sys, fw::cplx(1.0, 0.5));
    benchmark::DoNotOptimize(sample.value);
  }
}
BENCHMARK(BM_EvansPoint)->Unit(benchmark::kMillisecond);

void BM_PdeSecond(benchmark::State& state) {
  fw::SimConfig cfg;
  cfg.grid = {-100.0, 100.0, 0.05};
  cfg.params = {2.0, 0.0, 0.0};
  cfg.t_end = 1.0;
  cfg.dt_out = 1.0;
  const auto init = fw::gaussian_seed(cfg.grid, 0.5, 0.0, 1.0);
  for (auto _ : state) {
    auto res = fw::simulate(cfg, init);
    benchmark::DoNotOptimize(res.snapshots.back().A[0]);
  }
}
BENCHMARK(BM_PdeSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
