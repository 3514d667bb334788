#include <benchmark/benchmark.h>

#include "nmlab/correlations.hpp"
#include "nmlab/nonmarkov.hpp"

using namespace nmlab;

static void BM_FractionalPower(benchmark::State& state) {
  const UnitarySpectrum spec(circuit_unitary(CircuitVariant::SwapTerminated));
  double t = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(spec.power(t));
    t = t > 0.99 ? 0.0 : t + 0.01;
  }
}
BENCHMARK(BM_FractionalPower);

static void BM_ObservedMap(benchmark::State& state) {
  const UnitaryOp u = propagator(DynamicsScheme::block(), 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(observed_map(u, WernerParam(0.7)));
}
BENCHMARK(BM_ObservedMap);

static void BM_BlpMeasure(benchmark::State& state) {
  const auto scheme = DynamicsScheme::block();
  const TimeGrid grid = TimeGrid::for_scheme(scheme, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(blp_measure(scheme, WernerParam(0.8), grid));
}
BENCHMARK(BM_BlpMeasure)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

static void BM_RhpMeasure(benchmark::State& state) {
  const auto scheme = DynamicsScheme::block();
  const TimeGrid grid = TimeGrid::for_scheme(scheme);
  for (auto _ : state) benchmark::DoNotOptimize(rhp_measure(scheme, WernerParam(0.8), grid, {1e-3, kPinvRelTol, false}));
}
BENCHMARK(BM_RhpMeasure)->Unit(benchmark::kMillisecond);

static void BM_CorrelationSample(benchmark::State& state) {
  const DensityMatrix joint = joint_state(InputState::plus(), WernerParam(0.6), DynamicsScheme::gates(), 7.5);
  CorrelationConfig cfg;
  cfg.measured = state.range(0) == 0 ? MeasuredSide::System : MeasuredSide::Environment;
  for (auto _ : state) benchmark::DoNotOptimize(correlation_sample(joint, 7.5, 0.6, cfg));
}
BENCHMARK(BM_CorrelationSample)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
