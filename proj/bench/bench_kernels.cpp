// Serial reference paths against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "mertens/density_stream.hpp"
#include "mertens/prime_engine.hpp"
#include "mertens/serre_deviation.hpp"
#include "mertens/variety_catalog.hpp"

using namespace mertens;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

void BM_PrimeSieve(benchmark::State& state) {
  const auto limit = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(primes_up_to(limit, kDefaultSegmentSize, exec_of(state)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_PrimeSieve)->ArgsProduct({{10'000'000, 100'000'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_DensityProfile(benchmark::State& state) {
  const auto spec = VarietySpec::gl(3);
  const auto t_max = static_cast<double>(state.range(0));
  const auto schedule = geometric_schedule(t_max, 4);
  for (auto _ : state) benchmark::DoNotOptimize(density_profile(spec, t_max, schedule, exec_of(state)));
}
BENCHMARK(BM_DensityProfile)->ArgsProduct({{10'000'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EllipticScan(benchmark::State& state) {
  const auto spec = VarietySpec::elliptic(2, 3);
  const auto p_max = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_deviations(spec, p_max, exec_of(state)));
}
BENCHMARK(BM_EllipticScan)->ArgsProduct({{100'000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_TraceTable(benchmark::State& state) {
  const EcCurve curve(2, 3);
  const auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ec_trace(curve, p));
}
BENCHMARK(BM_TraceTable)->Arg(1'000'003);

void BM_TraceLegendre(benchmark::State& state) {
  const EcCurve curve(2, 3);
  const auto p = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ec_trace_reference(curve, p));
}
BENCHMARK(BM_TraceLegendre)->Arg(1'000'003);

}  // namespace

BENCHMARK_MAIN();
