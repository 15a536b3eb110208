#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sops/behaviors.hpp"
#include "sops/simulator.hpp"

namespace sops {

/// Sizes, trials and reference qualities of a fitness evaluation.
class FitnessSetup {
 public:
  FitnessSetup(BehaviorSpec spec, std::vector<Instance> instances, int trials = 3);

  /// Default instances for the behavior and T = 3.
  static FitnessSetup defaults(Behavior b);

  const BehaviorSpec& spec() const { return spec_; }
  const std::vector<Instance>& instances() const { return instances_; }
  int trials() const { return trials_; }

  /// Quality of the (near-)optimal reference configuration per instance.
  const std::vector<double>& reference_quality(std::size_t instance) const {
    return reference_[instance];
  }

  /// Steps per trial for an instance: n^3 unless overridden.
  std::uint64_t steps(std::size_t instance) const;
  void set_steps_override(std::optional<std::uint64_t> steps) { steps_override_ = steps; }

 private:
  BehaviorSpec spec_;
  std::vector<Instance> instances_;
  int trials_;
  std::vector<std::vector<double>> reference_;
  std::optional<std::uint64_t> steps_override_;
};

struct TrialScore {
  std::size_t instance = 0;
  int trial = 0;
  std::vector<double> quality;
  double normalized = 0.0;
};

struct FitnessReport {
  double fitness = 0.0;
  std::vector<TrialScore> trials;  // instance-major order
};

/// Random stream of one fitness trial.
Rng trial_rng(std::uint64_t evaluation_key, std::size_t instance, int trial);

/// Mean over instances and trials of the weighted quality ratios.  Trials
/// may run on `threads` workers; the result does not depend on the count.
FitnessReport evaluate_fitness(const CommitTable& table, const FitnessSetup& setup,
                               std::uint64_t evaluation_key, unsigned threads = 1);
FitnessReport evaluate_fitness(const Genome& genome, const FitnessSetup& setup,
                               std::uint64_t evaluation_key, unsigned threads = 1);

/// Runs fn(i) for i in [0, count) on up to `threads` workers.  Work is
/// claimed dynamically; callers must make results depend only on i.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Worker count for a requested value (0 = hardware concurrency).
unsigned resolve_threads(unsigned requested);

}  // namespace sops
