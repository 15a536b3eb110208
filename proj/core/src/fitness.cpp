#include "sops/fitness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace sops {

FitnessSetup::FitnessSetup(BehaviorSpec spec, std::vector<Instance> instances, int trials)
    : spec_(spec), instances_(std::move(instances)), trials_(trials) {
  if (instances_.empty()) throw std::invalid_argument("fitness needs at least one system size");
  if (trials_ < 1) throw std::invalid_argument("fitness needs at least one trial");
  reference_.reserve(instances_.size());
  for (const Instance& inst : instances_) {
    reference_.push_back(quality(spec_, optimal_configuration(spec_, inst)));
  }
}

FitnessSetup FitnessSetup::defaults(Behavior b) {
  return FitnessSetup(BehaviorSpec{b}, default_instances(b), 3);
}

std::uint64_t FitnessSetup::steps(std::size_t instance) const {
  if (steps_override_) return *steps_override_;
  return cubic_steps(instances_.at(instance).n);
}

Rng trial_rng(std::uint64_t evaluation_key, std::size_t instance, int trial) {
  return make_rng({evaluation_key, static_cast<std::uint64_t>(instance),
                   static_cast<std::uint64_t>(trial)});
}

FitnessReport evaluate_fitness(const CommitTable& table, const FitnessSetup& setup,
                               std::uint64_t evaluation_key, unsigned threads) {
  const std::size_t trials = static_cast<std::size_t>(setup.trials());
  FitnessReport report;
  report.trials.resize(setup.instances().size() * trials);
  parallel_for(report.trials.size(), threads, [&](std::size_t k) {
    const std::size_t i = k / trials;
    const int t = static_cast<int>(k % trials);
    Rng rng = trial_rng(evaluation_key, i, t);
    TrialResult r = run_trial(setup.spec(), setup.instances()[i], setup.steps(i), table, rng);
    const double norm = normalized_quality(setup.spec(), r.quality, setup.reference_quality(i));
    report.trials[k] = TrialScore{i, t, std::move(r.quality), norm};
  });
  double total = 0.0;
  for (const TrialScore& s : report.trials) total += s.normalized;
  report.fitness = total / static_cast<double>(report.trials.size());
  return report;
}

FitnessReport evaluate_fitness(const Genome& genome, const FitnessSetup& setup,
                               std::uint64_t evaluation_key, unsigned threads) {
  return evaluate_fitness(CommitTable::from_genome(genome), setup, evaluation_key, threads);
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  threads = std::min<unsigned>(resolve_threads(threads), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace sops
