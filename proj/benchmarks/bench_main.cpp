#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "flyscan/completion.hpp"
#include "flyscan/objective.hpp"
#include "flyscan/pipeline.hpp"
#include "flyscan/router.hpp"
#include "flyscan/scanner.hpp"
#include "flyscan/test_images.hpp"

using namespace flyscan;

namespace {

std::vector<Point2> random_points(std::size_t n, double extent, unsigned seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, extent);
  std::vector<Point2> pts(n);
  for (Point2& p : pts)
    p = {u(rng), u(rng)};
  return pts;
}

void BM_NearestNeighborRoute(benchmark::State& state)
{
  const auto pts = random_points(static_cast<std::size_t>(state.range(0)), 255.0, 1);
  RouteParams params;
  params.candidate_subset_size = static_cast<std::size_t>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(nn_order(pts, params));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_NearestNeighborRoute)
  ->ArgsProduct({{150, 600, 2400, 9600}, {0, 16}})
  ->Unit(benchmark::kMicrosecond);

void BM_LossGradient(benchmark::State& state)
{
  const GradientField grad = central_gradient(synthetic_shapes(256));
  const auto scanned = random_points(static_cast<std::size_t>(state.range(1)), 255.0, 2);
  const auto cand = random_points(static_cast<std::size_t>(state.range(0)), 255.0, 3);
  const AnchorObjective obj(grad, scanned, ObjectiveParams{});
  for (auto _ : state)
    benchmark::DoNotOptimize(obj.evaluate(cand, true));
}
BENCHMARK(BM_LossGradient)
  ->ArgsProduct({{600}, {1000, 10000}})
  ->Unit(benchmark::kMicrosecond);

void BM_AdamOptimize(benchmark::State& state)
{
  const GradientField grad = central_gradient(synthetic_shapes(256));
  const auto scanned = random_points(5000, 255.0, 4);
  const AnchorSet start = AnchorSet::from_points(random_points(600, 255.0, 5));
  ObjectiveParams params;
  params.s_steps = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(adam_optimize(grad, start, scanned, params));
}
BENCHMARK(BM_AdamOptimize)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_IdwComplete(benchmark::State& state)
{
  const ImageGrid truth = synthetic_shapes(256);
  const ScanPath path(random_points(static_cast<std::size_t>(state.range(0)), 255.0, 6));
  const ReadoutLog log = fly_scan(truth, path, ProbeConfig{});
  IdwParams params;
  params.k_idw = static_cast<int>(state.range(1));
  for (auto _ : state)
    benchmark::DoNotOptimize(idw_complete(log, 256, 256, params));
  state.counters["readouts"] = static_cast<double>(log.size());
}
BENCHMARK(BM_IdwComplete)
  ->ArgsProduct({{50, 400}, {8, 32}})
  ->Unit(benchmark::kMillisecond);

void BM_FlyScan(benchmark::State& state)
{
  const ImageGrid truth = synthetic_shapes(256);
  const ScanPath path(random_points(200, 255.0, 7));
  for (auto _ : state)
    benchmark::DoNotOptimize(fly_scan(truth, path, ProbeConfig{}));
}
BENCHMARK(BM_FlyScan)->Unit(benchmark::kMicrosecond);

void BM_RunIteration(benchmark::State& state)
{
  const ImageGrid truth = synthetic_shapes(256);
  const RunConfig cfg;
  const RunState start = initial_scan(truth, cfg);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_iteration(start, truth, cfg));
}
BENCHMARK(BM_RunIteration)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
