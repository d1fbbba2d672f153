#include <benchmark/benchmark.h>

#include <random>

#include "weylspec/band.hpp"
#include "weylspec/spectrum.hpp"

namespace {

weylspec::HermitianBand random_band(std::size_t n, std::size_t kd) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  weylspec::HermitianBand a(n, kd);
  for (std::size_t j = 0; j < n; ++j) {
    a.set(j, j, {g(rng), 0.0});
    for (std::size_t i = j + 1; i < std::min(n, j + kd + 1); ++i) a.set(i, j, {g(rng), g(rng)});
  }
  return a;
}

void BM_BandEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kd = static_cast<std::size_t>(state.range(1));
  const auto a = random_band(n, kd);
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::band_eigenvalues(a));
}
BENCHMARK(BM_BandEigenvalues)->Args({256, 2})->Args({961, 31})->Args({3001, 1})->Unit(benchmark::kMillisecond);

void BM_DenseEigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dense = random_band(n, std::min<std::size_t>(31, n - 1)).to_dense();
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::eigen_hermitian(dense));
}
BENCHMARK(BM_DenseEigenvalues)->Arg(256)->Arg(961)->Unit(benchmark::kMillisecond);

}  // namespace
