#include <benchmark/benchmark.h>

#include "weylspec/hofstadter.hpp"

namespace {

void BM_BlochSpectrum(benchmark::State& state) {
  const weylspec::RationalFlux flux(1, state.range(0));
  const weylspec::BlochGrid grid(static_cast<int>(state.range(1)), static_cast<int>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::bloch_spectrum(flux, grid));
}
BENCHMARK(BM_BlochSpectrum)->Args({2, 512})->Args({3, 128})->Args({65, 64})->Unit(benchmark::kMillisecond);

void BM_BlochEigenvalues(benchmark::State& state) {
  const weylspec::RationalFlux flux(1, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::bloch_eigenvalues(flux, 0.3, 0.7));
}
BENCHMARK(BM_BlochEigenvalues)->Arg(3)->Arg(32)->Arg(128)->Arg(192);

}  // namespace
