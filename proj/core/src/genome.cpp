#include "sops/genome.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sops {

namespace {

constexpr int kBackSize = 3;
constexpr int kMiddleSize = 2;
constexpr int kFrontSize = 3;

// Pairs per region for separation/coating: sum_{k=0..size}(k+1).
constexpr int pair_count(int size) { return (size + 1) * (size + 2) / 2; }
constexpr int kBackPairs = pair_count(kBackSize);      // 10
constexpr int kMiddlePairs = pair_count(kMiddleSize);  // 6
constexpr int kFrontPairs = pair_count(kFrontSize);    // 10

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("invalid locus: ") + what);
}

void check_count(int v, int size) { require(v >= 0 && v <= size, "region count out of range"); }

void check_pair(const ColorCount& c, int size) {
  check_count(c.total, size);
  require(c.same >= 0 && c.same <= c.total, "same-colour count exceeds neighbor count");
}

void check_pair(const ObjectCount& c, int size) {
  require(c.particles >= 0 && c.objects >= 0 && c.particles + c.objects <= size,
          "particle + object count exceeds region size");
}

ColorCount unrank_color(int rank) {
  int total = 0;
  while (color_pair_rank(total + 1, 0) <= rank) ++total;
  return {total, rank - color_pair_rank(total, 0)};
}

ObjectCount unrank_object(int size, int rank) {
  int particles = 0;
  while (particles < size && object_pair_rank(size, particles + 1, 0) <= rank) ++particles;
  return {particles, rank - object_pair_rank(size, particles, 0)};
}

}  // namespace

std::string_view behavior_name(Behavior b) {
  switch (b) {
    case Behavior::Aggregation: return "aggregation";
    case Behavior::Phototaxing: return "phototaxing";
    case Behavior::Separation: return "separation";
    case Behavior::Coating: return "coating";
  }
  return "unknown";
}

std::string_view behavior_short_name(Behavior b) {
  switch (b) {
    case Behavior::Aggregation: return "agg";
    case Behavior::Phototaxing: return "ptx";
    case Behavior::Separation: return "sep";
    case Behavior::Coating: return "coat";
  }
  return "unknown";
}

std::optional<Behavior> parse_behavior(std::string_view s) {
  for (Behavior b : kAllBehaviors) {
    if (s == behavior_name(b) || s == behavior_short_name(b)) return b;
  }
  return std::nullopt;
}

Behavior locus_behavior(const Locus& locus) {
  return static_cast<Behavior>(locus.index());
}

std::size_t locus_space_size(Behavior b) {
  switch (b) {
    case Behavior::Aggregation: return 4 * 3 * 4;
    case Behavior::Phototaxing: return 4 * 3 * 4 * 3;
    case Behavior::Separation:
    case Behavior::Coating: return kBackPairs * kMiddlePairs * kFrontPairs;
  }
  return 0;
}

std::size_t locus_index(const Locus& locus) {
  struct Visitor {
    std::size_t operator()(const AggregationLocus& l) const {
      check_count(l.back, kBackSize);
      check_count(l.middle, kMiddleSize);
      check_count(l.front, kFrontSize);
      return static_cast<std::size_t>((l.back * 3 + l.middle) * 4 + l.front);
    }
    std::size_t operator()(const PhototaxingLocus& l) const {
      const std::size_t base = (*this)(AggregationLocus{l.back, l.middle, l.front});
      const auto light = static_cast<std::size_t>(l.light);
      require(light < 3, "light transition out of range");
      return base * 3 + light;
    }
    std::size_t operator()(const SeparationLocus& l) const {
      check_pair(l.back, kBackSize);
      check_pair(l.middle, kMiddleSize);
      check_pair(l.front, kFrontSize);
      const int b = color_pair_rank(l.back.total, l.back.same);
      const int m = color_pair_rank(l.middle.total, l.middle.same);
      const int f = color_pair_rank(l.front.total, l.front.same);
      return static_cast<std::size_t>((b * kMiddlePairs + m) * kFrontPairs + f);
    }
    std::size_t operator()(const CoatingLocus& l) const {
      check_pair(l.back, kBackSize);
      check_pair(l.middle, kMiddleSize);
      check_pair(l.front, kFrontSize);
      const int b = object_pair_rank(kBackSize, l.back.particles, l.back.objects);
      const int m = object_pair_rank(kMiddleSize, l.middle.particles, l.middle.objects);
      const int f = object_pair_rank(kFrontSize, l.front.particles, l.front.objects);
      return static_cast<std::size_t>((b * kMiddlePairs + m) * kFrontPairs + f);
    }
  };
  return std::visit(Visitor{}, locus);
}

Locus locus_from_index(Behavior b, std::size_t index) {
  if (index >= locus_space_size(b)) {
    throw std::out_of_range("locus index " + std::to_string(index) + " out of range for " +
                            std::string(behavior_name(b)));
  }
  const int i = static_cast<int>(index);
  switch (b) {
    case Behavior::Aggregation:
      return AggregationLocus{i / 12, (i / 4) % 3, i % 4};
    case Behavior::Phototaxing: {
      const int base = i / 3;
      return PhototaxingLocus{base / 12, (base / 4) % 3, base % 4,
                              static_cast<LightTransition>(i % 3)};
    }
    case Behavior::Separation:
      return SeparationLocus{unrank_color(i / (kMiddlePairs * kFrontPairs)),
                             unrank_color((i / kFrontPairs) % kMiddlePairs),
                             unrank_color(i % kFrontPairs)};
    case Behavior::Coating:
      return CoatingLocus{unrank_object(kBackSize, i / (kMiddlePairs * kFrontPairs)),
                          unrank_object(kMiddleSize, (i / kFrontPairs) % kMiddlePairs),
                          unrank_object(kFrontSize, i % kFrontPairs)};
  }
  throw std::invalid_argument("unknown behavior");
}

Allele::Allele(int value) {
  if (value < kMinAllele || value > kMaxAllele) {
    throw std::invalid_argument("allele must lie in 0..10, got " + std::to_string(value));
  }
  value_ = static_cast<std::uint8_t>(value);
}

double Allele::probability() const { return std::ldexp(1.0, -static_cast<int>(value_)); }

double allele_to_probability(Allele a) { return a.probability(); }

Genome::Genome(Behavior behavior, int allele)
    : behavior_(behavior),
      alleles_(locus_space_size(behavior), static_cast<std::uint8_t>(Allele(allele).value())) {}

Genome::Genome(Behavior behavior, std::vector<std::uint8_t> alleles)
    : behavior_(behavior), alleles_(std::move(alleles)) {
  if (alleles_.size() != locus_space_size(behavior)) {
    throw std::invalid_argument("genome for " + std::string(behavior_name(behavior)) +
                                " needs " + std::to_string(locus_space_size(behavior)) +
                                " alleles, got " + std::to_string(alleles_.size()));
  }
  for (std::uint8_t a : alleles_) static_cast<void>(Allele(a));
}

void Genome::set_allele(std::size_t index, int value) {
  alleles_.at(index) = static_cast<std::uint8_t>(Allele(value).value());
}

double Genome::lookup(const Locus& locus) const {
  if (locus_behavior(locus) != behavior_) {
    throw std::invalid_argument("locus behavior does not match genome behavior");
  }
  return Allele(alleles_[locus_index(locus)]).probability();
}

}  // namespace sops
