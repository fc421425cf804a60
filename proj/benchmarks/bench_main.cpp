#include <benchmark/benchmark.h>

#include "genlim/conditions.hpp"
#include "genlim/sim.hpp"

using namespace genlim;

namespace {

void BM_FmsRelate(benchmark::State& state) {
  Fms a(make_base(BaseKind::Full), {}, FiniteSet::of_ids({3, 17, 42}));
  Fms b(make_base(BaseKind::Full), {}, FiniteSet::of_ids({17, 99}));
  for (auto _ : state) benchmark::DoNotOptimize(relate(a, b));
}
BENCHMARK(BM_FmsRelate);

void BM_FmsEnumerate(benchmark::State& state) {
  Fms s(make_base(BaseKind::Suffix, -5), FiniteSet::of_ids({}), FiniteSet::of_values({2}));
  for (auto _ : state) benchmark::DoNotOptimize(s.enumerate(state.range(0)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FmsEnumerate)->Arg(64)->Arg(1024);

void BM_ConditionCheck(benchmark::State& state) {
  Collection c = Collection::builtin(CollectionName::SingleRemoval);
  SearchBounds bounds{25, 3, 100, 3};
  for (auto _ : state) benchmark::DoNotOptimize(check_angluin(c, bounds));
}
BENCHMARK(BM_ConditionCheck);

void BM_IdentifierDuel(benchmark::State& state) {
  DuelConfig cfg;
  cfg.collection = CollectionName::PrimeMultiples;
  cfg.generator.kind = GeneratorKind::IdentifierExact;
  cfg.adversary = AdversaryKind::Canonical;
  cfg.adversary_params.target = 2;
  cfg.notions = {Notion::Exact};
  cfg.horizon = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_duel(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK(BM_IdentifierDuel)->Arg(1000);

void BM_PhasedLowerBoundDuel(benchmark::State& state) {
  DuelConfig cfg;
  cfg.collection = CollectionName::SingleRemoval;
  cfg.generator.kind = GeneratorKind::KmSubset;
  cfg.adversary = AdversaryKind::LbPhase;
  cfg.adversary_params.star = 0;
  cfg.adversary_params.predicate = BreadthPredicate::Exact;
  cfg.notions = {Notion::Exact};
  cfg.horizon = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(run_duel(cfg));
  state.SetItemsProcessed(state.iterations() * cfg.horizon);
}
BENCHMARK(BM_PhasedLowerBoundDuel)->Arg(10'000);

} // namespace

BENCHMARK_MAIN();
