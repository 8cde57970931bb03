#include <benchmark/benchmark.h>

#include <numbers>

#include "mpnet/channels.hpp"
#include "mpnet/metrics.hpp"
#include "mpnet/propagators.hpp"
#include "mpnet/protocol.hpp"
#include "mpnet/qle.hpp"

using namespace mpnet;

namespace {

void BM_BeamsplitterPropagator(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(two_mode_propagator(GeneratorKind::beamsplitter, 0.4, d, d));
  }
}
BENCHMARK(BM_BeamsplitterPropagator)->Arg(12)->Arg(30);

void BM_SqueezePropagator(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        two_mode_propagator(GeneratorKind::two_mode_squeeze, 0.39, d, d, {.leak_tol = 1.0}));
  }
}
BENCHMARK(BM_SqueezePropagator)->Arg(12)->Arg(30);

void BM_LossKraus(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d * d, d * d) / static_cast<double>(d * d);
  const FockDensityMatrix rho(ModeDims{d, d}, m);
  for (auto _ : state) benchmark::DoNotOptimize(apply_loss(rho, 1, 0.631));
}
BENCHMARK(BM_LossKraus)->Arg(12)->Arg(20);

void BM_LogNegativityTmsv(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const auto tmsv = apply_stokes_squeeze(vacuum(ModeDims{d, d}), 0, 1, 0.39, {.leak_tol = 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(log_negativity_fock(tmsv, std::size_t{1}));
}
BENCHMARK(BM_LogNegativityTmsv)->Arg(12)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_RunTransfer(benchmark::State& state) {
  const auto sc = default_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run_transfer(sc));
}
BENCHMARK(BM_RunTransfer)->Unit(benchmark::kMillisecond);

void BM_RunEntanglement(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_entanglement(0.39, 0.93, 1.0, d, 1e-8));
}
BENCHMARK(BM_RunEntanglement)->Arg(20)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_AdiabaticSweepPoint(benchmark::State& state) {
  AdiabaticSweepOptions opts;
  opts.cavity_linewidth = 2 * std::numbers::pi * 500e6;
  const double ratio[] = {0.02};
  for (auto _ : state) benchmark::DoNotOptimize(validate_adiabatic(opts, ratio));
}
BENCHMARK(BM_AdiabaticSweepPoint)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
