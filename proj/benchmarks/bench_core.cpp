#include <benchmark/benchmark.h>

#include <memory>

#include "tpp/analytics.hpp"
#include "tpp/engine.hpp"
#include "tpp/overlay.hpp"

namespace {

void BM_GenerateGnp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpp::generate_gnp(n, 10.0 / n, seed++));
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_GenerateGnp)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SolveTimeout(benchmark::State& state) {
  tpp::ProtocolParams p;
  for (auto _ : state) benchmark::DoNotOptimize(tpp::solve_timeout(p));
}
BENCHMARK(BM_SolveTimeout);

void BM_RunSmall(benchmark::State& state) {
  tpp::SimConfig c;
  c.params.device_count = 300;
  c.params.apps_per_month = 30;
  c.params.fanout_probability = 0.03;
  c.params.penetration_threshold = 0.03;
  c.params.monitor_period = 24;
  c.params.timeout = 16;
  c.graph = std::make_shared<tpp::OverlayGraph>(tpp::OverlayGraph::uniform(300, 0.03));
  c.malicious_app_ids = {0};
  c.downloads_per_device = 10;
  c.record_series = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpp::run(c));
    ++c.seed;
  }
}
BENCHMARK(BM_RunSmall)->Unit(benchmark::kMillisecond);

void BM_Coverage(benchmark::State& state) {
  const auto g = tpp::generate_gnp(1000, 0.01, 1);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tpp::run_coverage_experiment(g, static_cast<int>(state.range(0)), 1, 100000, seed++));
  }
}
BENCHMARK(BM_Coverage)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
