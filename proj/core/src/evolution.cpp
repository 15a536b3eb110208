#include "sops/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace sops {

namespace {

// Stream tags keep the initial population, breeding and evaluation streams apart.
constexpr std::uint64_t kInitTag = 0x696e6974;   // "init"
constexpr std::uint64_t kBreedTag = 0x62726564;  // "bred"
constexpr std::uint64_t kEvalTag = 0x6576616c;   // "eval"

}  // namespace

EvolutionParams EvolutionParams::defaults(Behavior b) {
  EvolutionParams p;
  p.behavior = b;
  p.sizes = default_sizes(b);
  switch (b) {
    case Behavior::Aggregation:
      p.population = 50;
      p.generations = 100;
      p.mutation_rate = 0.021;
      break;
    case Behavior::Phototaxing:
      p.population = 150;
      p.generations = 200;
      p.mutation_rate = 0.007;
      break;
    case Behavior::Separation:
      p.population = 600;
      p.generations = 300;
      p.mutation_rate = 0.005;
      p.hypermutation = 10.0;
      break;
    case Behavior::Coating:
      p.population = 600;
      p.generations = 750;
      p.mutation_rate = 0.005;
      p.hypermutation = 10.0;
      break;
  }
  return p;
}

void EvolutionParams::validate() const {
  const auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (population < 2) fail("population size must be at least 2");
  if (generations < 0) fail("generation count must be non-negative");
  if (!(mutation_rate > 0.0 && mutation_rate < 1.0)) fail("mutation rate must lie in (0, 1)");
  if (hypermutation && !(*hypermutation > 1.0)) fail("hypermutation factor must exceed 1");
  if (hypermutation && *hypermutation * mutation_rate >= 1.0) {
    fail("hypermutated rate must stay below 1");
  }
  if (!(diversity_low >= 0.0 && diversity_low <= diversity_high && diversity_high <= 1.0)) {
    fail("diversity thresholds must satisfy 0 <= low <= high <= 1");
  }
  if (sizes.empty()) fail("at least one system size is required");
  for (int n : sizes) {
    if (n < 1) fail("system sizes must be positive");
  }
  if (trials < 1) fail("at least one trial is required");
  if (colors < 1 || colors > Configuration::kMaxColors) fail("colour count out of range");
}

// ---------------------------------------------------------------------------

HypermutationController::HypermutationController(double base_rate, std::optional<double> factor,
                                                 double low, double high)
    : base_(base_rate), factor_(factor), low_(low), high_(high) {}

double HypermutationController::update(double diversity) {
  if (factor_) {
    if (!active_ && diversity <= low_) {
      active_ = true;
    } else if (active_ && diversity >= high_) {
      active_ = false;
    }
  }
  return rate();
}

// ---------------------------------------------------------------------------

std::size_t tournament_select(std::span<const Individual> population, Rng& rng) {
  const std::size_t size = population.size();
  if (size < 2) throw std::invalid_argument("tournament needs at least two individuals");
  const auto i = static_cast<std::size_t>(uniform_below(rng, size));
  auto j = static_cast<std::size_t>(uniform_below(rng, size - 1));
  if (j >= i) ++j;
  const double fi = population[i].fitness;
  const double fj = population[j].fitness;
  if (fi > fj) return i;
  if (fj > fi) return j;
  return coin(rng) ? i : j;
}

std::pair<std::size_t, std::size_t> crossover_points(std::size_t length, Rng& rng) {
  // Pairs with first point x: L - x + 1 choices of y.
  const std::uint64_t total = (static_cast<std::uint64_t>(length) + 1) * (length + 2) / 2;
  std::uint64_t k = uniform_below(rng, total);
  std::size_t x = 0;
  while (k >= length - x + 1) {
    k -= length - x + 1;
    ++x;
  }
  return {x, x + static_cast<std::size_t>(k)};
}

std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t x,
                                              std::size_t y) {
  if (a.behavior() != b.behavior() || a.size() != b.size()) {
    throw std::invalid_argument("crossover parents must share behavior and length");
  }
  if (x > y || y > a.size()) throw std::invalid_argument("crossover points out of range");
  std::vector<std::uint8_t> ca(a.alleles().begin(), a.alleles().end());
  std::vector<std::uint8_t> cb(b.alleles().begin(), b.alleles().end());
  std::swap_ranges(ca.begin() + static_cast<std::ptrdiff_t>(x),
                   ca.begin() + static_cast<std::ptrdiff_t>(y),
                   cb.begin() + static_cast<std::ptrdiff_t>(x));
  return {Genome(a.behavior(), std::move(ca)), Genome(b.behavior(), std::move(cb))};
}

std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, Rng& rng) {
  if (a.size() != b.size()) throw std::invalid_argument("crossover parents differ in length");
  const auto [x, y] = crossover_points(a.size(), rng);
  return two_point_crossover(a, b, x, y);
}

int mutate_allele(int allele, Rng& rng) {
  return coin(rng) ? std::max(allele - 1, kMinAllele) : std::min(allele + 1, kMaxAllele);
}

Genome mutate(const Genome& genome, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw std::invalid_argument("mutation rate must lie in [0, 1)");
  Genome out = genome;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (uniform01(rng) < rate) out.set_allele(i, mutate_allele(out.allele(i), rng));
  }
  return out;
}

double population_diversity(std::span<const Genome> genomes) {
  if (genomes.size() < 2) throw std::invalid_argument("diversity needs at least two genomes");
  const std::size_t length = genomes.front().size();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < genomes.size(); ++i) {
    if (genomes[i].size() != length) throw std::invalid_argument("genome lengths differ");
    const auto ai = genomes[i].alleles();
    for (std::size_t j = i + 1; j < genomes.size(); ++j) {
      const auto aj = genomes[j].alleles();
      for (std::size_t k = 0; k < length; ++k) {
        total += static_cast<std::uint64_t>(std::abs(int{ai[k]} - int{aj[k]}));
      }
    }
  }
  const double pairs = static_cast<double>(genomes.size()) * (genomes.size() - 1) / 2.0;
  return static_cast<double>(total) / pairs / (static_cast<double>(kMaxAllele) * length);
}

double population_diversity(std::span<const Individual> population) {
  std::vector<Genome> genomes;
  genomes.reserve(population.size());
  for (const Individual& ind : population) genomes.push_back(ind.genome);
  return population_diversity(genomes);
}

// ---------------------------------------------------------------------------

FitnessSetup make_fitness_setup(const EvolutionParams& params) {
  params.validate();
  std::vector<Instance> instances;
  for (int n : params.sizes) instances.push_back(make_instance(params.behavior, n));
  BehaviorSpec spec{params.behavior};
  spec.colors = params.colors;
  return FitnessSetup(spec, std::move(instances), params.trials);
}

EvolutionEngine::EvolutionEngine(EvolutionParams params, unsigned threads)
    : EvolutionEngine(params, make_fitness_setup(params), threads) {}

EvolutionEngine::EvolutionEngine(EvolutionParams params, FitnessSetup setup, unsigned threads)
    : params_(std::move(params)),
      setup_(std::move(setup)),
      threads_(resolve_threads(threads)),
      controller_(params_.mutation_rate, params_.hypermutation, params_.diversity_low,
                  params_.diversity_high) {
  params_.validate();
  if (setup_.spec().behavior != params_.behavior) {
    throw std::invalid_argument("fitness setup behavior does not match evolution parameters");
  }
}

std::uint64_t EvolutionEngine::evaluation_key(int generation, std::size_t index) const {
  return derive_key({params_.seed, kEvalTag, static_cast<std::uint64_t>(generation),
                     static_cast<std::uint64_t>(index)});
}

void EvolutionEngine::evaluate(std::vector<Individual>& members, int generation) {
  for (std::size_t i = 0; i < members.size(); ++i) {
    members[i].evaluation_key = evaluation_key(generation, i);
  }
  parallel_for(members.size(), threads_, [&](std::size_t i) {
    members[i].fitness =
        evaluate_fitness(members[i].genome, setup_, members[i].evaluation_key).fitness;
  });
}

void EvolutionEngine::observe(Population& population) {
  population.diversity = population_diversity(population.members);
  population.mutation_rate = controller_.update(population.diversity);
  population.hypermutating = controller_.active();
}

Population EvolutionEngine::initial_population() {
  Rng rng = make_rng({params_.seed, kInitTag});
  const std::size_t length = locus_space_size(params_.behavior);
  Population pop;
  pop.members.reserve(static_cast<std::size_t>(params_.population));
  for (int i = 0; i < params_.population; ++i) {
    std::vector<std::uint8_t> alleles(length);
    for (auto& a : alleles) a = static_cast<std::uint8_t>(uniform_below(rng, kMaxAllele + 1));
    pop.members.push_back(Individual{Genome(params_.behavior, std::move(alleles)), 0.0, 0});
  }
  evaluate(pop.members, 0);
  observe(pop);
  return pop;
}

Population EvolutionEngine::run_generation(const Population& parents, int generation) {
  if (generation < 1) throw std::invalid_argument("bred generations are numbered from 1");
  if (parents.members.size() < 2) throw std::invalid_argument("population too small");
  Rng rng = make_rng({params_.seed, kBreedTag, static_cast<std::uint64_t>(generation)});
  const std::size_t size = parents.members.size();

  std::vector<std::size_t> chosen(size);
  for (auto& c : chosen) c = tournament_select(parents.members, rng);

  Population next;
  next.members.reserve(size);
  for (std::size_t k = 0; k + 1 < size; k += 2) {
    auto [a, b] = two_point_crossover(parents.members[chosen[k]].genome,
                                      parents.members[chosen[k + 1]].genome, rng);
    next.members.push_back(Individual{mutate(a, parents.mutation_rate, rng), 0.0, 0});
    next.members.push_back(Individual{mutate(b, parents.mutation_rate, rng), 0.0, 0});
  }
  if (next.members.size() < size) {
    next.members.push_back(
        Individual{mutate(parents.members[chosen.back()].genome, parents.mutation_rate, rng), 0.0,
                   0});
  }
  evaluate(next.members, generation);
  observe(next);
  return next;
}

GenerationStats EvolutionEngine::stats(const Population& population, int generation) const {
  GenerationStats s;
  s.generation = generation;
  const auto& m = population.members;
  double sum = 0.0;
  s.best_fitness = m.front().fitness;
  for (const Individual& ind : m) {
    sum += ind.fitness;
    s.best_fitness = std::max(s.best_fitness, ind.fitness);
  }
  s.mean_fitness = sum / static_cast<double>(m.size());
  double var = 0.0;
  for (const Individual& ind : m) var += (ind.fitness - s.mean_fitness) * (ind.fitness - s.mean_fitness);
  s.std_fitness = std::sqrt(var / static_cast<double>(m.size()));
  s.diversity = population.diversity;
  s.mutation_rate = population.mutation_rate;
  return s;
}

}  // namespace sops
