#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sops/archive.hpp"
#include "sops/baselines.hpp"
#include "sops/evolution.hpp"
#include "sops/fitness.hpp"

namespace sops {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitIo = 3 };

// ---------------------------------------------------------------------------
// evolve

/// Unset fields fall back to the config file, then to the behavior defaults.
struct EvolveOptions {
  std::optional<std::string> behavior;
  std::optional<std::filesystem::path> config_file;
  std::optional<int> population;
  std::optional<int> generations;
  std::optional<double> mutation_rate;
  std::optional<double> hypermutation;  // 0 disables
  std::optional<double> diversity_low;
  std::optional<double> diversity_high;
  std::optional<std::vector<int>> sizes;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> colors;
  std::optional<std::filesystem::path> out;
  std::optional<unsigned> threads;
  bool resume = false;
};

struct RunConfig {
  EvolutionParams params;
  std::filesystem::path out;  // empty: no archive
  unsigned threads = 0;
};

/// Layers defaults, config file and options.  Throws std::invalid_argument
/// on bad values and IoError if the config file cannot be read.
RunConfig resolve_run_config(const EvolveOptions& options);

struct EvolutionSummary {
  std::vector<GenerationStats> stats;
  double best_fitness = 0.0;
  std::optional<Genome> best_genome;
};

/// Runs (or resumes) the generational loop, archiving every generation when
/// config.out is set.  `progress` sees each completed generation.
EvolutionSummary run_evolution(const RunConfig& config, bool resume,
                               const std::function<void(const GenerationStats&)>& progress = {});

int cmd_evolve(const EvolveOptions& options, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// evaluate

struct AlgorithmChoice {
  std::optional<std::filesystem::path> genome;
  std::optional<std::string> baseline;  // "li" or "threshold"
  double lambda = 6.0;
  int e_max = 2;
  double p_low = 0.04;
};

/// The commit table and behavior of a genome file or a named baseline.
struct LoadedAlgorithm {
  Behavior behavior = Behavior::Aggregation;
  CommitTable table;
  std::optional<Genome> genome;
  std::optional<ClosedFormAlgorithm> closed_form;
  std::string description;
};
LoadedAlgorithm load_algorithm(const AlgorithmChoice& choice);

struct EvaluateOptions {
  AlgorithmChoice algorithm;
  std::optional<std::vector<int>> sizes;
  int trials = 3;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> evaluation_key;  // overrides the seed-derived key
  std::optional<std::uint64_t> steps;           // overrides n^3
  int colors = 3;
  unsigned threads = 0;
};

struct EvaluateResult {
  std::string description;
  std::vector<int> sizes;
  FitnessReport report;
  double mean_normalized = 0.0;
  double std_normalized = 0.0;  // population standard deviation over trials
};

EvaluateResult run_evaluate(const EvaluateOptions& options);
int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// scale-run

struct ScaleRunOptions {
  AlgorithmChoice algorithm;
  int n = 0;
  std::optional<std::uint64_t> steps;  // default n^3
  std::optional<std::filesystem::path> object_file;
  std::uint64_t snapshot_every = 0;
  std::uint64_t seed = 1;
  int colors = 3;
  std::optional<std::filesystem::path> out;  // snapshot JSONL; stdout if unset
};

struct ScaleRunResult {
  std::uint64_t steps = 0;
  std::vector<double> quality;
  double normalized = 0.0;
  std::vector<std::pair<std::uint64_t, double>> trajectory;  // (step, normalized)
};

/// One trial at an arbitrary size.  Snapshots are JSON lines
/// {"step", "quality", "normalized", "nodes": [[q, r, color], ...]}; the
/// first line also carries "object" and "arena_side".
ScaleRunResult run_scale(const ScaleRunOptions& options, std::ostream* snapshots);
int cmd_scale_run(const ScaleRunOptions& options, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------
// bins

/// CSV "e,locus,probability" over all aggregation loci.
int cmd_bins(const AlgorithmChoice& algorithm, std::ostream& out, std::ostream& err);

}  // namespace sops
