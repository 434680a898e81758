#include <benchmark/benchmark.h>

#include "algothermo/channel.hpp"
#include "algothermo/ensemble.hpp"
#include "algothermo/machine.hpp"

namespace {

using namespace algothermo;

void BM_ThetaTable(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(EnsembleTable(Spectrum({0, 1, 1}), n, 2 * n + 1));
  }
}
BENCHMARK(BM_ThetaTable)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_Channel(benchmark::State& state) {
  const TableMachine& d = BuiltinMachine("dyadic2").table();
  ChannelConfig cfg;
  cfg.N = 3;
  cfg.L = 4;
  cfg.samples = static_cast<std::uint64_t>(state.range(0));
  cfg.seed = 42;
  for (auto _ : state) benchmark::DoNotOptimize(SimulateChannel(d, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Channel)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMillisecond);

}  // namespace
