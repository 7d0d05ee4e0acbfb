// Parallel kernels against their serial references.
// Run with OMP_NUM_THREADS set to compare thread counts.
#include <benchmark/benchmark.h>

#include "vlp/operators.hpp"
#include "vlp/varexp.hpp"

namespace {

vlp::Field field_2d(std::size_t n) { return vlp::random_smooth_field(vlp::Grid(2, 8.0, n), 11); }

void BM_Maximal(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::maximal_function(f));
}

void BM_MaximalReference(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::reference::maximal_function(f));
}

void BM_RieszPotential(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::riesz_potential(f, 1.0));
}

void BM_RieszPotentialReference(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::reference::riesz_potential(f, 1.0));
}

void BM_Integrate(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::integrate(f));
}

void BM_IntegrateReference(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(vlp::reference::integrate(f));
}

void BM_Luxemburg(benchmark::State& state) {
  const auto f = field_2d(static_cast<std::size_t>(state.range(0)));
  const auto p = vlp::VariableExponent::constant(f.grid(), 2.5);
  for (auto _ : state) benchmark::DoNotOptimize(vlp::luxemburg_norm(f, p));
}

}  // namespace

BENCHMARK(BM_Maximal)->Arg(32)->Arg(64)->Arg(128);
BENCHMARK(BM_MaximalReference)->Arg(32)->Arg(64);
BENCHMARK(BM_RieszPotential)->Arg(16)->Arg(32);
BENCHMARK(BM_RieszPotentialReference)->Arg(16)->Arg(32);
BENCHMARK(BM_Integrate)->Arg(256)->Arg(1024);
BENCHMARK(BM_IntegrateReference)->Arg(256)->Arg(1024);
BENCHMARK(BM_Luxemburg)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
