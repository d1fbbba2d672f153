#include <benchmark/benchmark.h>

#include <vector>

#include "weylspec/expr.hpp"
#include "weylspec/hofstadter.hpp"
#include "weylspec/quantize.hpp"

namespace {

void BM_ParseSymbol(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(weylspec::parse_symbol("(1 + 0.3*cos(x1))*cos(2*xi1 - x1) + cos(xi2 + b*x1)", 2,
                                                    {{"b", 1.0}}));
  }
}
BENCHMARK(BM_ParseSymbol);

void BM_Eval(benchmark::State& state) {
  const auto e = weylspec::parse_expr("cos(xi1)+cos(xi2+b*x1)", 2);
  const weylspec::ParamMap p{{"b", 1.0}};
  const std::vector<double> x{0.3, 0.1};
  const std::vector<double> xi{1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::eval(e, x, xi, p));
}
BENCHMARK(BM_Eval);

void BM_FiberMatrix(benchmark::State& state) {
  const auto a = weylspec::weyl_hopping(weylspec::harper_symbol(1.0 / 3.0));
  const std::vector<double> x0{0.0, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::fiber_matrix(a, x0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_FiberMatrix)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_FilteredSpectrum(benchmark::State& state) {
  const auto a = weylspec::weyl_hopping(weylspec::harper_symbol(1.0 / 3.0));
  weylspec::FilterSpec f;
  f.half_width = static_cast<int>(state.range(0));
  f.fibers_per_axis = 1;
  for (auto _ : state) benchmark::DoNotOptimize(weylspec::filtered_spectrum(a, f));
}
BENCHMARK(BM_FilteredSpectrum)->Arg(10)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
