#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "milnorkit/estimator.hpp"
#include "milnorkit/rips.hpp"

using namespace milnorkit;

namespace {

PointCloud circle(std::size_t n) {
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    c.push_back(std::cos(a));
    c.push_back(std::sin(a));
  }
  return make_cloud(2, std::move(c));
}

PointCloud sphere(std::size_t n) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> c;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g(rng), y = g(rng), z = g(rng);
    const double r = std::sqrt(x * x + y * y + z * z);
    c.insert(c.end(), {x / r, y / r, z / r});
  }
  return make_cloud(3, std::move(c));
}

void BM_RipsCircle(benchmark::State& state) {
  const auto cloud = circle(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(rips_chi(cloud, 0.3, 1));
}
BENCHMARK(BM_RipsCircle)->Arg(300)->Arg(1000);

void BM_RipsSphere(benchmark::State& state) {
  const auto cloud = sphere(1000);
  const double r = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(rips_chi(cloud, r, 2));
}
BENCHMARK(BM_RipsSphere)->Arg(15)->Arg(30);

void BM_EstimateSphere(benchmark::State& state) {
  const auto cloud = sphere(1000);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_chi(cloud, 2));
}
BENCHMARK(BM_EstimateSphere)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
