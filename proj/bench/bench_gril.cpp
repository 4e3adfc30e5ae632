#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

#include "dgril/complex.hpp"
#include "dgril/gril.hpp"

using namespace dgril;

namespace {

struct Instance {
  SimplicialComplex complex;
  std::vector<double> values;
};

// Random graph on n vertices with about 1.5n edges, lower-star values.
Instance make_instance(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Vertex> pick(0, static_cast<Vertex>(n - 1));
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (Vertex v = 1; v < n; ++v) edges.push_back({std::uniform_int_distribution<Vertex>(0, v - 1)(rng), v});
  for (std::size_t e = 0; e < n / 2; ++e) {
    Vertex a = pick(rng), b = pick(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.push_back({a, b});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  Instance inst{graph_complex(n, edges), {}};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> vv(2 * n);
  for (auto& x : vv) x = u(rng);
  inst.values = lower_star_extend(inst.complex, vv).values;
  return inst;
}

void BM_GrilVectorParallel(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
  const GrilConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(gril_vector(inst.complex, inst.values, cfg));
}

void BM_GrilVectorSerial(benchmark::State& state) {
  const auto inst = make_instance(static_cast<std::size_t>(state.range(0)), 1);
  const GrilConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(gril_vector_serial(inst.complex, inst.values, cfg));
}

}  // namespace

BENCHMARK(BM_GrilVectorParallel)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_GrilVectorSerial)->Arg(10)->Arg(20)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
