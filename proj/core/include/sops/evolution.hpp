#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sops/fitness.hpp"
#include "sops/genome.hpp"
#include "sops/rng.hpp"

namespace sops {

struct EvolutionParams {
  Behavior behavior = Behavior::Aggregation;
  int population = 50;
  int generations = 100;
  double mutation_rate = 0.021;
  std::optional<double> hypermutation;  // factor H > 1
  double diversity_low = 0.072;
  double diversity_high = 0.27;
  std::vector<int> sizes;
  int trials = 3;
  std::uint64_t seed = 1;
  int colors = 3;

  /// Default P, G, M, H and evaluation sizes per behavior.
  static EvolutionParams defaults(Behavior b);

  /// Throws std::invalid_argument on out-of-range values.
  void validate() const;
};

struct Individual {
  Genome genome;
  double fitness = 0.0;
  std::uint64_t evaluation_key = 0;
};

/// Diversity-triggered mutation-rate switch with hysteresis.
class HypermutationController {
 public:
  HypermutationController(double base_rate, std::optional<double> factor, double low,
                          double high);

  /// Observes a population diversity and returns the rate to use next.
  double update(double diversity);

  double rate() const { return active_ ? base_ * factor_.value_or(1.0) : base_; }
  bool active() const { return active_; }
  void restore(bool active) { active_ = active && factor_.has_value(); }

 private:
  double base_;
  std::optional<double> factor_;
  double low_;
  double high_;
  bool active_ = false;
};

struct Population {
  std::vector<Individual> members;
  double diversity = 0.0;
  double mutation_rate = 0.0;  // rate used to breed the next generation
  bool hypermutating = false;
};

/// Deterministic binary tournament over two distinct uniform indices; ties
/// are broken by a fair coin.  Returns the winner's index.
std::size_t tournament_select(std::span<const Individual> population, Rng& rng);

/// Cut points 0 <= x <= y <= L drawn uniformly over all such pairs.
std::pair<std::size_t, std::size_t> crossover_points(std::size_t length, Rng& rng);

/// Exchanges the segments [x, y) of the two parents.
std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, std::size_t x,
                                              std::size_t y);
std::pair<Genome, Genome> two_point_crossover(const Genome& a, const Genome& b, Rng& rng);

/// a-1 (floored at 0) or a+1 (capped at 10), each with probability 1/2.
int mutate_allele(int allele, Rng& rng);

/// Each gene mutates independently with probability `rate`.
Genome mutate(const Genome& genome, double rate, Rng& rng);

/// Mean pairwise L1 distance divided by 10 L.
double population_diversity(std::span<const Genome> genomes);
double population_diversity(std::span<const Individual> population);

struct GenerationStats {
  int generation = 0;
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  double std_fitness = 0.0;
  double diversity = 0.0;
  double mutation_rate = 0.0;
};

/// The generational loop: evaluation, selection, crossover, mutation and
/// the hypermutation controller.  Random streams are derived from the
/// master seed and the generation number, and each genome's evaluation key
/// from (seed, generation, index), so results do not depend on threads.
class EvolutionEngine {
 public:
  EvolutionEngine(EvolutionParams params, unsigned threads = 0);
  EvolutionEngine(EvolutionParams params, FitnessSetup setup, unsigned threads = 0);

  const EvolutionParams& params() const { return params_; }
  const FitnessSetup& setup() const { return setup_; }

  /// Uniform random alleles, evaluated; the controller observes it.
  Population initial_population();

  /// Breeds generation `generation` (>= 1) from its predecessor.
  Population run_generation(const Population& parents, int generation);

  /// Statistics of an evaluated population.
  GenerationStats stats(const Population& population, int generation) const;

  std::uint64_t evaluation_key(int generation, std::size_t index) const;

  /// Restores the controller state (archive resumption).
  void restore_controller(bool active) { controller_.restore(active); }

 private:
  void evaluate(std::vector<Individual>& members, int generation);
  void observe(Population& population);

  EvolutionParams params_;
  FitnessSetup setup_;
  unsigned threads_;
  HypermutationController controller_;
};

FitnessSetup make_fitness_setup(const EvolutionParams& params);

}  // namespace sops
