#include <benchmark/benchmark.h>

#include "ptdirac/opalg.hpp"
#include "ptdirac/spectral.hpp"

using namespace ptdirac;

static void BM_BuildTruncated(benchmark::State& state) {
  const auto d = derive_coeffs(PhysParams{});
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_truncated(d, static_cast<int>(state.range(0)), Branch::I, Valley::Primary));
  }
}
BENCHMARK(BM_BuildTruncated)->Arg(10)->Arg(40)->Arg(80);

static void BM_Eigensolve(benchmark::State& state) {
  const auto d = derive_coeffs(PhysParams{});
  const auto rep = scramble(build_truncated(d, static_cast<int>(state.range(0)), Branch::I, Valley::Primary), 7);
  for (auto _ : state) benchmark::DoNotOptimize(eigensolve(rep.matrix));
}
BENCHMARK(BM_Eigensolve)->Arg(10)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_ApplyHamiltonian(benchmark::State& state) {
  const auto c = complex_coeffs(PhysParams{});
  const auto h = build_hamiltonian(c, Valley::Primary);
  const auto probe = random_spinor_probes(1, static_cast<int>(state.range(0)), -0.17, 1).front();
  for (auto _ : state) benchmark::DoNotOptimize(act(h, probe));
}
BENCHMARK(BM_ApplyHamiltonian)->Arg(6)->Arg(20);

static void BM_JcVerify(benchmark::State& state) {
  const auto c = complex_coeffs(PhysParams{});
  for (auto _ : state) benchmark::DoNotOptimize(jc_verify(c, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_JcVerify)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

static void BM_ExceptionalPointBisection(benchmark::State& state) {
  const PhysParams p{};
  for (auto _ : state) benchmark::DoNotOptimize(find_exceptional_point(p, Vary::Lambda, 0.0, 2.0, 1e-6));
}
BENCHMARK(BM_ExceptionalPointBisection)->Unit(benchmark::kMillisecond)->Iterations(3);
BENCHMARK_MAIN();
