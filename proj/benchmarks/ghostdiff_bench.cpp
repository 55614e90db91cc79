#include <benchmark/benchmark.h>

#include <cmath>

#include "ghostdiff/correlation.hpp"
#include "ghostdiff/oracle.hpp"

using namespace ghostdiff;

namespace {

ModeGrid grid_of(benchmark::State& state) {
  return build_grid(4e6, static_cast<std::size_t>(state.range(0)), 500e-9);
}

const NSlit kDoubleSlit{2, 10e-6, 50e-6, 0};

void BM_KernelClosedForm(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_nslit(g, kDoubleSlit, 0.02));
}
BENCHMARK(BM_KernelClosedForm)->Arg(1025)->Arg(4097)->Arg(16385);

void BM_KernelQuadrature(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_quadrature(g, kDoubleSlit, 0.02, 1024));
}
BENCHMARK(BM_KernelQuadrature)->Arg(1025)->Arg(4097)->Unit(benchmark::kMillisecond);

void BM_SweepPattern(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  const GhostSetup setup{gaussian_spectrum(g, 1.0, 1e6), make_beam_splitter(std::sqrt(0.5)),
                         kernel_nslit(g, kDoubleSlit, 0.02), make_detector_map(0.5, 500e-9), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(sweep_pattern(setup, -0.03, 0.03, 1025));
}
BENCHMARK(BM_SweepPattern)->Arg(1025)->Arg(4097)->Unit(benchmark::kMillisecond);

void BM_SignalIntensityProfile(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  const GhostSetup setup{flat_spectrum(g, 1.0), make_beam_splitter(std::sqrt(0.5)),
                         kernel_nslit(g, kDoubleSlit, 0.02), make_detector_map(0.5, 500e-9), 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(signal_intensity_profile(setup));
}
BENCHMARK(BM_SignalIntensityProfile)->Arg(1025)->Arg(4097)->Unit(benchmark::kMillisecond);

void BM_ExactMoments(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  const auto s = flat_spectrum(g, 1.0);
  const auto k = kernel_nslit(g, kDoubleSlit, 0.02);
  const auto bs = make_beam_splitter(0.6);
  for (auto _ : state) benchmark::DoNotOptimize(exact_moments_by_matrix(s, bs, k));
}
BENCHMARK(BM_ExactMoments)->Arg(257)->Arg(1025)->Unit(benchmark::kMillisecond);

void BM_MonteCarloBlock(benchmark::State& state) {
  const ModeGrid g = grid_of(state);
  const auto s = flat_spectrum(g, 1.0);
  const auto k = kernel_nslit(g, kDoubleSlit, 0.02);
  const auto bs = make_beam_splitter(0.6);
  const double probes[] = {0.0, g.kx(g.center() + 3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(estimate_moments(s, bs, k, probes, 0.0, kBlockSize, 1));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(kBlockSize));
}
BENCHMARK(BM_MonteCarloBlock)->Arg(513)->Arg(1025)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
