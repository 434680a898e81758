#include <benchmark/benchmark.h>

#include "algothermo/complexity.hpp"
#include "algothermo/enumerate.hpp"
#include "algothermo/machine.hpp"
#include "algothermo/thermo.hpp"

namespace {

using namespace algothermo;

void BM_DovetailSdvm(benchmark::State& state) {
  const Machine& m = BuiltinMachine("sdvm");
  for (auto _ : state) {
    benchmark::DoNotOptimize(Dovetail(m, static_cast<std::uint32_t>(state.range(0))));
  }
}
BENCHMARK(BM_DovetailSdvm)->Arg(10)->Arg(14)->Unit(benchmark::kMillisecond);

void BM_CensusSdvm(benchmark::State& state) {
  const Machine& m = BuiltinMachine("sdvm");
  for (auto _ : state) {
    benchmark::DoNotOptimize(RunCensus(m, static_cast<Length>(state.range(0)), 4096));
  }
}
BENCHMARK(BM_CensusSdvm)->Arg(14)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_SpectrumRow(benchmark::State& state) {
  const TableMachine& h = BuiltinMachine("harmonic").table();
  const mpq_class t(1, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        RowFromSpectrum(h, t, {}, static_cast<Length>(state.range(0)), Precision{128}));
  }
}
BENCHMARK(BM_SpectrumRow)->Arg(40)->Arg(160)->Unit(benchmark::kMicrosecond);

}  // namespace
