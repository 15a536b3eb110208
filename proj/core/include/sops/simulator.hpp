#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sops/behaviors.hpp"
#include "sops/configuration.hpp"
#include "sops/genome.hpp"
#include "sops/rng.hpp"

namespace sops {

/// Per-locus commit thresholds.  A move commits iff a 64-bit draw is below
/// its threshold, so allele a (probability 2^-a) commits iff the top a bits
/// of the draw are zero.  Probability one never consumes a draw.
class CommitTable {
 public:
  static constexpr std::uint64_t kAlways = ~std::uint64_t{0};

  static CommitTable from_genome(const Genome& genome);
  /// Probabilities in (0, 1], one per locus index.
  static CommitTable from_probabilities(Behavior b, std::span<const double> probabilities);

  Behavior behavior() const { return behavior_; }
  std::size_t size() const { return thresholds_.size(); }
  std::uint64_t threshold(std::size_t locus) const { return thresholds_[locus]; }
  double probability(std::size_t locus) const;

  static bool commit(Rng& rng, std::uint64_t threshold) {
    return threshold == kAlways || rng() < threshold;
  }

 private:
  CommitTable(Behavior b, std::vector<std::uint64_t> t) : behavior_(b), thresholds_(std::move(t)) {}

  Behavior behavior_;
  std::vector<std::uint64_t> thresholds_;
};

struct StepOutcome {
  MoveKind kind = MoveKind::Invalid;
  bool committed = false;
};

/// One running particle system: configuration, algorithm and incrementally
/// maintained quality counters.  Single-threaded; many may run in parallel.
class Simulation {
 public:
  Simulation(BehaviorSpec spec, Configuration config, CommitTable table);

  /// One proposal: particle and direction uniform, then validity and commit.
  StepOutcome step(Rng& rng);
  /// Proposal of a specific (particle, direction) pair.
  StepOutcome propose(std::size_t particle, int direction, Rng& rng);
  void run(Rng& rng, std::uint64_t steps);

  const BehaviorSpec& spec() const { return spec_; }
  const Configuration& configuration() const { return config_; }
  Configuration& mutable_configuration_for_testing() { return config_; }
  const QualityCounters& counters() const { return counters_; }
  std::vector<double> quality() const;

  /// Locus index of p -> v computed from raw cells (the hot-path extractor).
  std::size_t fast_locus_index(std::size_t particle, int direction) const;

 private:
  template <Behavior B>
  StepOutcome propose_impl(std::size_t particle, int direction, Rng& rng);
  template <Behavior B>
  void run_impl(Rng& rng, std::uint64_t steps);

  struct DirectionCells {
    int target;
    int back[3];
    int middle[2];
    int front[3];
  };

  BehaviorSpec spec_;
  Configuration config_;
  CommitTable table_;
  QualityCounters counters_;
  DirectionCells dirs_[6];
};

/// Applies one proposal to `config` in place (convenience wrapper).
void step(Configuration& config, const BehaviorSpec& spec, const Genome& genome, Rng& rng);

struct TrialPlan {
  BehaviorSpec spec;
  Instance instance;
  std::uint64_t steps = 0;
  std::uint64_t seed = 0;
};

/// n^3, the step budget of a fitness trial.
std::uint64_t cubic_steps(int n);

struct TrialResult {
  Configuration final_configuration;
  std::vector<double> quality;
};

/// Called every `every` steps (and at step 0 and the final step).
struct SnapshotObserver {
  std::uint64_t every = 0;
  std::function<void(std::uint64_t step, const Simulation&)> on_snapshot;
};

/// random_initialization from the plan's seed, then exactly plan.steps steps.
TrialResult run_trial(const TrialPlan& plan, const CommitTable& table,
                      const SnapshotObserver& observer = {});

/// Same, from an explicit random stream (fitness trials).
TrialResult run_trial(const BehaviorSpec& spec, const Instance& instance, std::uint64_t steps,
                      const CommitTable& table, Rng& rng, const SnapshotObserver& observer = {});

}  // namespace sops
