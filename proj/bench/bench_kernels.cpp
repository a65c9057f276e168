#include <benchmark/benchmark.h>

#include "wittsplit/group_model.hpp"
#include "wittsplit/lie_analysis.hpp"
#include "wittsplit/section_engine.hpp"

using namespace wittsplit;

namespace {

const GroupSpec kBfsSpec{Family::Sp, 4, 3, 1, 1, {}};
const GroupSpec kCocycleSpec{Family::PGSp, 4, 3, 1, 1, {}};
const GroupSpec kLinesSpec{Family::G2, 14, 2, 1, 1, {}};

void BM_bfs_parallel(benchmark::State& st) {
  const GroupContext g(kBfsSpec);
  for (auto _ : st) benchmark::DoNotOptimize(bfs_enumerate(g).order);
}

void BM_bfs_serial(benchmark::State& st) {
  const GroupContext g(kBfsSpec);
  for (auto _ : st) benchmark::DoNotOptimize(bfs_enumerate_serial(g).order);
}

void BM_cocycle_parallel(benchmark::State& st) {
  const ExtensionInstance ext(kCocycleSpec);
  for (auto _ : st) benchmark::DoNotOptimize(ext.cocycle_table_parallel().size());
}

void BM_cocycle_serial(benchmark::State& st) {
  const ExtensionInstance ext(kCocycleSpec);
  for (auto _ : st) benchmark::DoNotOptimize(ext.cocycle_table_serial().size());
}

void BM_lines_parallel(benchmark::State& st) {
  const LieModule L(kLinesSpec);
  const OperatorSet m = L.module_ops();
  for (auto _ : st) benchmark::DoNotOptimize(minimal_submodules(m, LineMode::Exhaustive).size());
}

void BM_lines_serial(benchmark::State& st) {
  const LieModule L(kLinesSpec);
  const OperatorSet m = L.module_ops();
  for (auto _ : st) benchmark::DoNotOptimize(minimal_submodules_serial(m).size());
}

}  // namespace

BENCHMARK(BM_bfs_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_bfs_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cocycle_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_cocycle_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lines_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_lines_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
