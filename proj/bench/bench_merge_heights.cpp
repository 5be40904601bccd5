// Parallel kd-tree Boruvka against the serial O(n^2) Prim reference.

#include <benchmark/benchmark.h>

#include <random>

#include "ifsgap/metgaps.hpp"
#include "ifsgap/model.hpp"

using namespace ifsgap;

namespace {

metgaps::PointCloud uniform_cloud(std::size_t n, std::size_t dim) {
  std::mt19937_64 rng(n * 31 + dim);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(n * dim);
  for (auto& x : xs) x = u(rng);
  return metgaps::PointCloud::from_coordinates(dim, std::move(xs));
}

metgaps::PointCloud mixed_cloud(int depth) {
  const auto g = model::GDInstance::ifs({{Rational(1, 2), 1, Rational(0)}, {Rational(1, 3), 1, Rational(2, 3)}});
  model::ApproximateOptions opts;
  opts.interval_budget = std::size_t{1} << 22;
  return metgaps::PointCloud::from_approximation(model::approximate(g, 0, depth, opts));
}

void BM_Boruvka(benchmark::State& state) {
  const auto c = uniform_cloud(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(metgaps::mst_weights(c));
  state.SetComplexityN(state.range(0));
}

void BM_PrimReference(benchmark::State& state) {
  const auto c = uniform_cloud(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(metgaps::mst_weights_reference(c));
  state.SetComplexityN(state.range(0));
}

void BM_BoruvkaAttractor(benchmark::State& state) {
  const auto c = mixed_cloud(static_cast<int>(state.range(0)));
  state.counters["points"] = static_cast<double>(c.size());
  for (auto _ : state) benchmark::DoNotOptimize(metgaps::mst_weights(c));
}

void BM_PrimAttractor(benchmark::State& state) {
  const auto c = mixed_cloud(static_cast<int>(state.range(0)));
  state.counters["points"] = static_cast<double>(c.size());
  for (auto _ : state) benchmark::DoNotOptimize(metgaps::mst_weights_reference(c));
}

}  // namespace

BENCHMARK(BM_Boruvka)->ArgsProduct({{1000, 4000, 16000}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrimReference)->ArgsProduct({{1000, 4000, 16000}, {1, 2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoruvkaAttractor)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PrimAttractor)->DenseRange(10, 14, 2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
