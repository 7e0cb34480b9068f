// Serial reference vs OpenMP kernels on the two hot paths: one multi-split
// test and a small size/power table.

#include "tosi/core/tosi.hpp"
#include "tosi/estimators/regression.hpp"
#include "tosi/harness/dgp.hpp"
#include "tosi/harness/simulate.hpp"

#include <benchmark/benchmark.h>

#include <array>

using namespace tosi;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_SplitTests(benchmark::State& state) {
  const RegressionData d = gen_regression(200, 300, 10, RngStream(1, "bench"));
  Matrix joined(d.x.rows(), d.x.cols() + 1);
  joined << d.y, d.x;
  const DataMatrix data(joined);
  const RegressionBackend backend(0);
  const SplitPlan plan = make_split_plan(200, 8, RngStream(1, "bench-plan"));
  const std::array<TestRequest, 2> requests{TestRequest{{1, 2, 3, 4, 5}, Mode::max},
                                            TestRequest{{1, 2, 3, 4, 5}, Mode::min}};
  for (auto _ : state) {
    auto out = run_split_tests(data, backend, plan, requests, exec_of(state));
    benchmark::DoNotOptimize(out);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_SplitTests)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SizePower(benchmark::State& state) {
  SimConfig cfg;
  cfg.experiment = Experiment::mean;
  cfg.n = 100;
  cfg.p = 200;
  cfg.s = 5;
  cfg.reps = 200;
  cfg.splits = {1, 8};
  cfg.seed = 3;
  for (auto _ : state) {
    auto table = run_size_power(cfg, exec_of(state));
    benchmark::DoNotOptimize(table);
  }
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}
BENCHMARK(BM_SizePower)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
