// Serial reference against the OpenMP kernels.

#include <benchmark/benchmark.h>

#include "towercalc/harmonic_spaces.hpp"
#include "towercalc/parallel.hpp"
#include "towercalc/towers.hpp"

using namespace towercalc;

namespace {

ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) ? ExecPolicy::parallel : ExecPolicy::serial;
}

// Fresh seed computation each iteration: the shared cache is cleared.
void BM_SeedBasis(benchmark::State& state) {
  const auto policy = policy_of(state);
  for (auto _ : state) {
    SeedCache::global().clear();
    auto s = seed_basis(5, 2, 2, -1, policy);
    benchmark::DoNotOptimize(s.basis.size());
  }
}
BENCHMARK(BM_SeedBasis)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void BM_TowerPair(benchmark::State& state) {
  const auto policy = policy_of(state);
  for (auto _ : state) {
    SeedCache::global().clear();
    auto f = build_tower_pair(5, 2, Sign::plus, 1, 3, policy);
    benchmark::DoNotOptimize(f.D.size());
  }
}
BENCHMARK(BM_TowerPair)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

// Family-level parallelism as used by the build command.
void BM_FamilySweep(benchmark::State& state) {
  const auto policy = policy_of(state);
  for (auto _ : state) {
    SeedCache::global().clear();
    std::vector<TowerFamily> fams(6);
    for_each_index(policy, 6, [&](int i) {
      fams[i] = build_tower_pair(3, i % 3, i < 3 ? Sign::plus : Sign::minus, 2, 3);
    });
    benchmark::DoNotOptimize(fams.back().R.size());
  }
}
BENCHMARK(BM_FamilySweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
