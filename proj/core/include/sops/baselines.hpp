#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "sops/genome.hpp"
#include "sops/simulator.hpp"

namespace sops {

/// Move probability lambda^-e, e the mover's current neighbor count.
struct LiLambda {
  double lambda = 6.0;
};

/// Probability 1 when e <= e_max, otherwise p_low.
struct SimpleThreshold {
  int e_max = 2;
  double p_low = 0.04;
};

/// Closed-form aggregation algorithms evaluated through the same
/// locus -> probability interface as genomes, without rounding to alleles.
class ClosedFormAlgorithm {
 public:
  /// Throws std::invalid_argument unless lambda > 1, 0 < p_low <= 1 and
  /// 0 <= e_max <= 5.
  explicit ClosedFormAlgorithm(std::variant<LiLambda, SimpleThreshold> rule);

  static ClosedFormAlgorithm li(double lambda) { return ClosedFormAlgorithm(LiLambda{lambda}); }
  static ClosedFormAlgorithm simple_threshold(int e_max, double p_low) {
    return ClosedFormAlgorithm(SimpleThreshold{e_max, p_low});
  }

  const std::variant<LiLambda, SimpleThreshold>& rule() const { return rule_; }
  std::string describe() const;

  /// Probability for an aggregation locus.
  double probability(const Locus& locus) const;
  double probability_for_neighbors(int e) const;

  /// Table over all 48 aggregation loci.
  std::vector<double> probabilities() const;
  CommitTable commit_table() const;

 private:
  std::variant<LiLambda, SimpleThreshold> rule_;
};

/// For a valid aggregation move v is empty, so the mover's neighbors are
/// exactly its back and middle occupants.
int current_neighbors(const AggregationLocus& locus);

struct LocusBinEntry {
  std::size_t locus = 0;
  double probability = 0.0;
};

/// Loci grouped by e = back + middle with their decoded probabilities.
std::map<int, std::vector<LocusBinEntry>> genome_to_bins(const Genome& genome);
std::map<int, std::vector<LocusBinEntry>> algorithm_to_bins(const ClosedFormAlgorithm& alg);

}  // namespace sops
