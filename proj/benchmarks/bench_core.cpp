#include <benchmark/benchmark.h>

#include "qtomo/dynamics.hpp"
#include "qtomo/indicators.hpp"
#include "qtomo/tomography.hpp"

using namespace qtomo;

namespace {

const double kAlpha = 4.5506813;

const LambdaEngine& lambda_engine() {
  static const LambdaEngine engine(LambdaParams{}, kAlpha, kAlpha);
  return engine;
}

void BM_LambdaState(benchmark::State& state) {
  const auto& engine = lambda_engine();
  double tau = 0.0;
  for (auto _ : state) benchmark::DoNotOptimize(engine.state_at(tau += 5.0));
}
BENCHMARK(BM_LambdaState)->Unit(benchmark::kMillisecond);

void BM_LambdaSync(benchmark::State& state) {
  const auto psi = lambda_engine().state_at(60.0);
  for (auto _ : state) benchmark::DoNotOptimize(sync_indicator(psi, 0, 1));
}
BENCHMARK(BM_LambdaSync)->Unit(benchmark::kMillisecond);

void BM_TwoModeTomogram(benchmark::State& state) {
  const auto psi = lambda_engine().state_at(60.0);
  const auto g = QuadratureGrid::for_amplitude(std::sqrt(kAlpha * kAlpha + 1.0));
  const TwoModeTomographer t(psi.dims()[0], psi.dims()[1], g, g);
  for (auto _ : state) benchmark::DoNotOptimize(t(psi, 0, 1, 0.3, 1.2));
}
BENCHMARK(BM_TwoModeTomogram)->Unit(benchmark::kMillisecond);

void BM_SingleTomogram(benchmark::State& state) {
  const auto rho = partial_trace(lambda_engine().state_at(60.0), {0});
  const auto g = QuadratureGrid::for_amplitude(kAlpha);
  const auto thetas = equispaced_angles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tomogram_single(rho, thetas, g));
}
BENCHMARK(BM_SingleTomogram)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Wigner(benchmark::State& state) {
  const auto rho = partial_trace(lambda_engine().state_at(5.0), {0});
  const auto axis = QuadratureGrid(8.0, static_cast<std::size_t>(state.range(0))).points();
  for (auto _ : state) benchmark::DoNotOptimize(wigner(rho, axis, axis));
}
BENCHMARK(BM_Wigner)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

void BM_ApSleSeries(benchmark::State& state) {
  APParams p;
  p.n_max = p.atom_levels = 11;
  const APEngine engine(p, tensor({fock_state(10, 11), fock_state(0, 11)}));
  for (auto _ : state) {
    double acc = 0.0;
    for (int gt = 0; gt <= 700; ++gt) acc += sle(engine.state_at(gt), {0});
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_ApSleSeries)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
