#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sops/evolution.hpp"

namespace sops {

/// Raised for unreadable or unwritable archive files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One archived evaluation.
struct ArchivedIndividual {
  int generation = 0;
  std::size_t index = 0;
  double fitness = 0.0;
  std::uint64_t evaluation_key = 0;
  std::vector<std::uint8_t> alleles;
};

/// Serialised evolution parameters as stored in manifest.json.
std::string params_to_json(const EvolutionParams& params);
EvolutionParams params_from_json(const std::string& text);

/// One stats.csv row; doubles use %.17g so rows round-trip exactly.
std::string format_stats_row(const GenerationStats& s);
std::optional<GenerationStats> parse_stats_row(const std::string& line);
inline constexpr const char* kStatsHeader =
    "generation,best_fitness,mean_fitness,std_fitness,diversity,mutation_rate";

std::string individual_to_jsonl(const ArchivedIndividual& ind);
ArchivedIndividual individual_from_jsonl(const std::string& line);

/// Run directory layout:
///   manifest.json      parameters, seed, code version
///   stats.csv          one row per completed generation
///   population.jsonl   every evaluated genome
///   best_genome.json   best genome seen so far
///   hall_of_fame.json  top kHallOfFame evaluations seen so far
///
/// A generation's population lines are appended before its stats row, so a
/// generation is complete exactly when its stats row exists.  Files other
/// than the two append-only logs are replaced atomically.
class RunArchive {
 public:
  static constexpr std::size_t kHallOfFame = 5;

  /// True if `dir` already holds a manifest or stats file.
  static bool exists(const std::filesystem::path& dir);

  /// Starts a fresh archive; the directory must not hold one.
  static RunArchive create(const std::filesystem::path& dir, const EvolutionParams& params);

  /// Opens an existing archive, drops partially written generations and
  /// checks that `params` matches the manifest (the generation count may
  /// differ).  Throws std::invalid_argument on mismatch.
  static RunArchive resume(const std::filesystem::path& dir, const EvolutionParams& params);

  const std::filesystem::path& dir() const { return dir_; }

  /// Last completed generation, or -1 for an empty archive.
  int last_generation() const { return static_cast<int>(stats_.size()) - 1; }
  const std::vector<GenerationStats>& stats() const { return stats_; }

  /// Members of the last completed generation.
  std::vector<ArchivedIndividual> last_population() const;

  const std::vector<ArchivedIndividual>& hall_of_fame() const { return hall_; }

  /// Appends a completed generation and refreshes the derived files.
  void append(const Population& population, const GenerationStats& stats);

 private:
  RunArchive(std::filesystem::path dir, EvolutionParams params);
  void write_derived() const;
  void offer(const ArchivedIndividual& ind);

  std::filesystem::path dir_;
  EvolutionParams params_;
  std::vector<GenerationStats> stats_;
  std::vector<ArchivedIndividual> last_;
  std::vector<ArchivedIndividual> hall_;
};

/// Reads every line of population.jsonl.
std::vector<ArchivedIndividual> read_population_log(const std::filesystem::path& dir);

}  // namespace sops
