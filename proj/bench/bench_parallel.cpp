// Serial reference vs OpenMP kernels. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <enlab/brownian.hpp>
#include <enlab/poisson_lab.hpp>
#include <enlab/ruin.hpp>
#include <enlab/suite.hpp>

using namespace enlab;

static Execution mode(const benchmark::State& s) { return s.range(0) ? Execution::parallel : Execution::serial; }

static void BM_VerifySuite(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_verify_suite(1, 20, {5, 3, 1, 64}, mode(state)));
}
BENCHMARK(BM_VerifySuite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Crosscheck(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(run_crosscheck(1, 100, {5, 3, 1, 64}, mode(state)));
}
BENCHMARK(BM_Crosscheck)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Example1(benchmark::State& state) {
  const RuinTable psi(2.0);
  const auto model = PoissonModel::make(psi, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(example1_run(model, 20000, 7, mode(state)));
}
BENCHMARK(BM_Example1)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Example2(benchmark::State& state) {
  const RuinTable psi(2.0);
  const auto model = PoissonModel::make(psi, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(example2_run(model, psi, 20000, 7, {}, mode(state)));
}
BENCHMARK(BM_Example2)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_RuinMC(benchmark::State& state) {
  const RuinTable psi(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ruin_mc(psi, {0, 0.5, 1, 2}, 200000, 1, mode(state)));
}
BENCHMARK(BM_RuinMC)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Brownian(benchmark::State& state) {
  BrownianConfig cfg;
  cfg.paths = 5000;
  cfg.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(brownian_demo(cfg, mode(state)));
}
BENCHMARK(BM_Brownian)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

// Fast step-block walker vs the one-step-at-a-time reference.
static void BM_BrownianPath(benchmark::State& state) {
  BrownianConfig cfg;
  cfg.seed = 7;
  std::uint64_t i = 0;
  for (auto _ : state) {
    if (state.range(0))
      benchmark::DoNotOptimize(brownian_path(cfg, i++));
    else
      benchmark::DoNotOptimize(brownian_path_reference(cfg, i++));
  }
}
BENCHMARK(BM_BrownianPath)->Arg(0)->Arg(1);

BENCHMARK_MAIN();
