#include "regimevar/misspec.hpp"
#include "regimevar/simulate.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace regimevar;

namespace {

RegimeModel table1_p() {
  RegimeParams a{0.0, 0.3, 2.0, {0.0, 0.08}};
  RegimeParams b{0.0, 0.05, 0.8, {0.0, 0.15}};
  a.mu = 0.005 - a.lambda * kappa(a.jump);
  b.mu = 0.005 - b.lambda * kappa(b.jump);
  return two_state_model(a, b, 1.0, 0.2);
}

RegimeModel table1_q() {
  const RegimeModel p = table1_p();
  return apply_measure_change(p, MeasureChangeSpec::identity(p.regimes), 0.005).model;
}

SimConfig paths(benchmark::State& st) {
  SimConfig c;
  c.paths = static_cast<std::size_t>(st.range(0));
  c.seed = 1;
  return c;
}

void BM_McParallel(benchmark::State& st) {
  const RegimeModel m = table1_p();
  const SimConfig c = paths(st);
  for (auto _ : st)
    benchmark::DoNotOptimize(mc_expectation(m, 1.0, c, [](double x) { return std::exp(x); }));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

void BM_McSerial(benchmark::State& st) {
  const RegimeModel m = table1_p();
  const SimConfig c = paths(st);
  for (auto _ : st)
    benchmark::DoNotOptimize(
        mc_expectation_serial(m, 1.0, c, [](double x) { return std::exp(x); }));
  st.SetItemsProcessed(st.iterations() * st.range(0));
}

GridSpec wide_grid() {
  GridSpec g;
  g.strike_ratios = {0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4};
  g.maturities = {0.25, 0.5, 1.0, 2.0, 3.0};
  return g;
}

void BM_GridParallel(benchmark::State& st) {
  const RegimeModel q = table1_q();
  const GridSpec g = wide_grid();
  for (auto _ : st) benchmark::DoNotOptimize(synth_grid(q, 100.0, g));
}

void BM_GridSerial(benchmark::State& st) {
  const RegimeModel q = table1_q();
  const GridSpec g = wide_grid();
  for (auto _ : st) benchmark::DoNotOptimize(synth_grid_serial(q, 100.0, g));
}

}  // namespace

BENCHMARK(BM_McParallel)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_McSerial)->Arg(1 << 18)->Arg(1 << 20)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GridSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
