#include "sops/baselines.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sops {

ClosedFormAlgorithm::ClosedFormAlgorithm(std::variant<LiLambda, SimpleThreshold> rule)
    : rule_(rule) {
  if (const auto* li = std::get_if<LiLambda>(&rule_)) {
    if (!(li->lambda > 1.0)) throw std::invalid_argument("lambda must exceed 1");
  } else {
    const auto& st = std::get<SimpleThreshold>(rule_);
    if (!(st.p_low > 0.0 && st.p_low <= 1.0)) throw std::invalid_argument("p_low must lie in (0, 1]");
    if (st.e_max < 0 || st.e_max > 5) throw std::invalid_argument("e_max must lie in 0..5");
  }
}

std::string ClosedFormAlgorithm::describe() const {
  std::ostringstream out;
  if (const auto* li = std::get_if<LiLambda>(&rule_)) {
    out << "li(lambda=" << li->lambda << ")";
  } else {
    const auto& st = std::get<SimpleThreshold>(rule_);
    out << "simple_threshold(e_max=" << st.e_max << ", p_low=" << st.p_low << ")";
  }
  return out.str();
}

int current_neighbors(const AggregationLocus& locus) { return locus.back + locus.middle; }

double ClosedFormAlgorithm::probability_for_neighbors(int e) const {
  if (const auto* li = std::get_if<LiLambda>(&rule_)) return std::pow(li->lambda, -e);
  const auto& st = std::get<SimpleThreshold>(rule_);
  return e <= st.e_max ? 1.0 : st.p_low;
}

double ClosedFormAlgorithm::probability(const Locus& locus) const {
  const auto* agg = std::get_if<AggregationLocus>(&locus);
  if (agg == nullptr) throw std::invalid_argument("closed-form baselines use aggregation loci");
  static_cast<void>(locus_index(locus));  // validates the tuple
  return probability_for_neighbors(current_neighbors(*agg));
}

std::vector<double> ClosedFormAlgorithm::probabilities() const {
  const std::size_t size = locus_space_size(Behavior::Aggregation);
  std::vector<double> out(size);
  for (std::size_t i = 0; i < size; ++i) {
    out[i] = probability(locus_from_index(Behavior::Aggregation, i));
  }
  return out;
}

CommitTable ClosedFormAlgorithm::commit_table() const {
  return CommitTable::from_probabilities(Behavior::Aggregation, probabilities());
}

namespace {

template <typename ProbabilityOf>
std::map<int, std::vector<LocusBinEntry>> bin_loci(ProbabilityOf probability_of) {
  std::map<int, std::vector<LocusBinEntry>> bins;
  for (std::size_t i = 0; i < locus_space_size(Behavior::Aggregation); ++i) {
    const auto locus = std::get<AggregationLocus>(locus_from_index(Behavior::Aggregation, i));
    bins[current_neighbors(locus)].push_back({i, probability_of(i)});
  }
  return bins;
}

}  // namespace

std::map<int, std::vector<LocusBinEntry>> genome_to_bins(const Genome& genome) {
  if (genome.behavior() != Behavior::Aggregation) {
    throw std::invalid_argument("locus binning is defined for aggregation genomes");
  }
  return bin_loci([&](std::size_t i) { return Allele(genome.allele(i)).probability(); });
}

std::map<int, std::vector<LocusBinEntry>> algorithm_to_bins(const ClosedFormAlgorithm& alg) {
  const std::vector<double> p = alg.probabilities();
  return bin_loci([&](std::size_t i) { return p[i]; });
}

}  // namespace sops
