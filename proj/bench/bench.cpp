// Serial reference against the OpenMP kernels: the census over instances and
// decide over its top-level branches.

#include <benchmark/benchmark.h>

#include "reebext/census.hpp"
#include "reebext/search.hpp"

using namespace reebext;

namespace {

CensusOptions census_options(int vertices) {
  CensusOptions o;
  o.max_vertices = vertices;
  o.max_wraps = 1;
  o.max_strands = 3;
  return o;
}

void BM_CensusSerial(benchmark::State& state) {
  auto o = census_options(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(census(o));
}

void BM_CensusParallel(benchmark::State& state) {
  auto o = census_options(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(census_parallel(o));
}

// Many strands at the cut give decide many top-level branches.
LabeledReebGraph wide_instance() {
  return parse_instance(
      "slots 6\nvertex a slot=0 sign=-\nvertex b slot=1 sign=-\nvertex c slot=2 sign=-\n"
      "vertex d slot=3 sign=+\nvertex e slot=4 sign=+\nvertex f slot=5 sign=+\n"
      "edge p d -> a wraps=0\nedge q e -> b wraps=0\nedge r f -> c wraps=0\ncircle o degree=1\n");
}

void BM_DecideSerial(benchmark::State& state) {
  const auto g = wide_instance();
  for (auto _ : state) benchmark::DoNotOptimize(decide(g));
}

void BM_DecideParallel(benchmark::State& state) {
  const auto g = wide_instance();
  for (auto _ : state) benchmark::DoNotOptimize(decide_parallel(g));
}

}  // namespace

BENCHMARK(BM_CensusSerial)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CensusParallel)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecideSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DecideParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
