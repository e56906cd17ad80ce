// Parallel kernels against their serial references.
//   epishape_bench --benchmark_filter=Materialize

#include <benchmark/benchmark.h>

#include "epishape/box_graph.hpp"
#include "epishape/epidemic.hpp"
#include "epishape/philox.hpp"
#include "epishape/replicas.hpp"

using namespace epishape;

namespace {

FieldConfig field() {
  FieldConfig c;
  c.d = 3;
  c.lambda = 1.0;
  c.recovery = RecoveryDist::exponential(1.0);
  c.seed = 1;
  return c;
}

void BM_MaterializeSerial(benchmark::State& state) {
  const Box box = Box::centered(3, state.range(0));
  for (auto _ : state) {
    BoxGraph g(field(), box);
    g.materialize_serial();
    benchmark::DoNotOptimize(g.out_mask(0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.volume()));
}

void BM_MaterializeParallel(benchmark::State& state) {
  const Box box = Box::centered(3, state.range(0));
  for (auto _ : state) {
    BoxGraph g(field(), box);
    g.materialize();
    benchmark::DoNotOptimize(g.out_mask(0));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(box.volume()));
}

double one_replica(std::size_t r) {
  const auto run = run_epidemic(field().with_seed(replica_seed(1, r)), Box::centered(3, 12), 6.0);
  return static_cast<double>(run.ever_infected());
}

void BM_ReplicasSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(map_replicas_serial(n, one_replica));
}

void BM_ReplicasParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(map_replicas(n, one_replica));
}

}  // namespace

BENCHMARK(BM_MaterializeSerial)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MaterializeParallel)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicasSerial)->Arg(16)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReplicasParallel)->Arg(16)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
