#include <benchmark/benchmark.h>

#include "sops/evolution.hpp"
#include "sops/fitness.hpp"
#include "sops/simulator.hpp"

namespace {

sops::Genome uniform_genome(sops::Behavior b, std::uint64_t seed) {
  sops::Rng rng = sops::make_rng({seed});
  sops::Genome g(b);
  for (std::size_t j = 0; j < g.size(); ++j) g.set_allele(j, static_cast<int>(sops::uniform_below(rng, 11)));
  return g;
}

// Proposals per second for one behavior at size n.
void BM_Step(benchmark::State& state, sops::Behavior b) {
  const sops::BehaviorSpec spec{b};
  const int n = static_cast<int>(state.range(0));
  const sops::Instance inst = sops::make_instance(b, n);
  sops::Rng rng = sops::make_rng({1});
  sops::Simulation sim(spec, sops::random_initialization(spec, inst, rng),
                       sops::CommitTable::from_genome(uniform_genome(b, 2)));
  constexpr std::uint64_t kBatch = 10000;
  for (auto _ : state) sim.run(rng, kBatch);
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kBatch));
}

BENCHMARK_CAPTURE(BM_Step, aggregation, sops::Behavior::Aggregation)->Arg(61)->Arg(271);
BENCHMARK_CAPTURE(BM_Step, phototaxing, sops::Behavior::Phototaxing)->Arg(61)->Arg(271);
BENCHMARK_CAPTURE(BM_Step, separation, sops::Behavior::Separation)->Arg(60)->Arg(270);
BENCHMARK_CAPTURE(BM_Step, coating, sops::Behavior::Coating)->Arg(66)->Arg(252);

// One generation of a small population; compare thread counts for scaling.
void BM_Generation(benchmark::State& state) {
  sops::EvolutionParams p = sops::EvolutionParams::defaults(sops::Behavior::Aggregation);
  p.population = 8;
  p.sizes = {20};
  p.trials = 3;
  sops::EvolutionEngine engine(p, static_cast<unsigned>(state.range(0)));
  const sops::Population pop = engine.initial_population();
  int g = 1;
  for (auto _ : state) benchmark::DoNotOptimize(engine.run_generation(pop, g++));
  state.SetItemsProcessed(state.iterations() * p.population);
}
BENCHMARK(BM_Generation)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
