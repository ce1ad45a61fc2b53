// Timings for the exact backends, the model builder and the exact hypervolume.

#include <benchmark/benchmark.h>

#include <cstddef>
#include <random>
#include <vector>

#include "dom/dom.hpp"

namespace {

dom::PointSet uniform_set(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<dom::Point> rows(n, dom::Point(dim));
  for (auto& r : rows) {
    for (auto& v : r) v = u(rng);
  }
  return dom::PointSet(rows);
}

// Points on the simplex, so every set is mutually non-dominated.
dom::PointSet front(std::size_t n, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> e(1.0);
  std::vector<dom::Point> rows(n, dom::Point(dim));
  for (auto& r : rows) {
    double sum = 0.0;
    for (auto& v : r) sum += (v = e(rng));
    for (auto& v : r) v /= sum;
  }
  return dom::PointSet(rows);
}

void BM_SubsetDp(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dom::PointSet p = front(n, 3, 1);
  const dom::PointSet q = front(n, 3, 2);
  for (auto _ : state) benchmark::DoNotOptimize(dom::solve_dp_exact(p, q).value);
}
BENCHMARK(BM_SubsetDp)->DenseRange(4, 12, 2)->Unit(benchmark::kMicrosecond);

void BM_Exact2d(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dom::PointSet p = front(n, 2, 3);
  const dom::PointSet q = front(n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(dom::dom_2d(p, q).value);
}
BENCHMARK(BM_Exact2d)->RangeMultiplier(4)->Range(8, 512)->Unit(benchmark::kMicrosecond);

void BM_BuildModel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const dom::PointSet p = uniform_set(n, 5, 5);
  const dom::PointSet q = uniform_set(n, 5, 6);
  for (auto _ : state) benchmark::DoNotOptimize(dom::build_model(p, q).counts());
}
BENCHMARK(BM_BuildModel)->Arg(20)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Hypervolume(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto dim = static_cast<std::size_t>(state.range(1));
  const dom::PointSet s = front(n, dim, 7);
  const dom::Point ref(dim, 1.1);
  for (auto _ : state) benchmark::DoNotOptimize(dom::hypervolume(s, ref));
}
BENCHMARK(BM_Hypervolume)->ArgsProduct({{25, 50, 100}, {3, 4, 5}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
