#include <benchmark/benchmark.h>

#include <cmath>

#include "sfmb/observables.hpp"
#include "sfmb/scenario_io.hpp"
#include "sfmb/solver.hpp"

using namespace sfmb;

namespace {

Scenario fig5_at(double length, double alpha) {
  Scenario s = load_scenario(std::string(SFMB_SCENARIO_DIR) + "/fig5.conf");
  s.medium.length = length;
  s.medium.density = alpha / (s.transition.sigma_r * length);
  return s;
}

void BM_Step(benchmark::State& state) {
  const Scenario s = fig5_at(0.25, 1500.0);
  GridSpec g = make_grid(s, derive(s), static_cast<std::size_t>(state.range(0)));
  Stepper stepper(s, g, NoiseSpec{1, 0, true});
  FieldState f = initialize(s, g);
  for (auto _ : state) {
    stepper.step(f);
    if (f.step >= g.n_steps) f = initialize(s, g);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Step)->Arg(400)->Arg(1600);

void BM_Realization(benchmark::State& state) {
  Scenario s = fig5_at(0.1, 700.0);
  s.sim.t_end = 3.0;
  const GridSpec g = make_grid(s, derive(s));
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run(s, g, NoiseSpec{1, index++, true}));
}
BENCHMARK(BM_Realization)->Unit(benchmark::kMillisecond);

void BM_Spectrum(benchmark::State& state) {
  std::vector<cplx> series(static_cast<std::size_t>(state.range(0)));
  for (std::size_t i = 0; i < series.size(); ++i) series[i] = std::polar(std::exp(-1e-3 * i), 0.01 * i);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(series, 1e-3));
}
BENCHMARK(BM_Spectrum)->Arg(4096)->Arg(30000);

}  // namespace

BENCHMARK_MAIN();
