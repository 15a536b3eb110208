#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace sops {

enum class Behavior : std::uint8_t { Aggregation, Phototaxing, Separation, Coating };

inline constexpr Behavior kAllBehaviors[] = {Behavior::Aggregation, Behavior::Phototaxing,
                                             Behavior::Separation, Behavior::Coating};

/// "aggregation", "phototaxing", ...
std::string_view behavior_name(Behavior b);
/// "agg", "ptx", "sep", "coat"
std::string_view behavior_short_name(Behavior b);
/// Accepts either the full or the short name.
std::optional<Behavior> parse_behavior(std::string_view s);

// ---------------------------------------------------------------------------
// Loci
//
// Region sizes are back = 3, middle = 2, front = 3.  Every locus type orders
// its components lexicographically, and locus_index() is the rank of the
// tuple in that order.

enum class LightTransition : std::uint8_t { Same = 0, LitToUnlit = 1, UnlitToLit = 2 };

struct AggregationLocus {
  int back = 0;
  int middle = 0;
  int front = 0;
  friend bool operator==(const AggregationLocus&, const AggregationLocus&) = default;
};

struct PhototaxingLocus {
  int back = 0;
  int middle = 0;
  int front = 0;
  LightTransition light = LightTransition::Same;
  friend bool operator==(const PhototaxingLocus&, const PhototaxingLocus&) = default;
};

/// Occupied-neighbor count and same-colour count for one region.
struct ColorCount {
  int total = 0;
  int same = 0;
  friend bool operator==(const ColorCount&, const ColorCount&) = default;
};

struct SeparationLocus {
  ColorCount back;
  ColorCount middle;
  ColorCount front;
  friend bool operator==(const SeparationLocus&, const SeparationLocus&) = default;
};

/// Particle and object neighbor counts for one region.
struct ObjectCount {
  int particles = 0;
  int objects = 0;
  friend bool operator==(const ObjectCount&, const ObjectCount&) = default;
};

struct CoatingLocus {
  ObjectCount back;
  ObjectCount middle;
  ObjectCount front;
  friend bool operator==(const CoatingLocus&, const CoatingLocus&) = default;
};

using Locus = std::variant<AggregationLocus, PhototaxingLocus, SeparationLocus, CoatingLocus>;

Behavior locus_behavior(const Locus& locus);

/// 48, 144, 600, 600.
std::size_t locus_space_size(Behavior b);

/// Throws std::invalid_argument for tuples outside the behavior's locus space.
std::size_t locus_index(const Locus& locus);

/// Inverse of locus_index().
Locus locus_from_index(Behavior b, std::size_t index);

// Ranks of a single region pair, shared with the simulator's fast path.
// (total, same) with same <= total <= size: total*(total+1)/2 + same.
constexpr int color_pair_rank(int total, int same) { return total * (total + 1) / 2 + same; }
// (particles, objects) with particles + objects <= size.
constexpr int object_pair_rank(int region_size, int particles, int objects) {
  int offset = 0;
  for (int k = 0; k < particles; ++k) offset += region_size + 1 - k;
  return offset + objects;
}

// ---------------------------------------------------------------------------
// Alleles and genomes

inline constexpr int kMinAllele = 0;
inline constexpr int kMaxAllele = 10;

class Allele {
 public:
  /// Throws std::invalid_argument unless 0 <= value <= 10.
  explicit Allele(int value);

  int value() const { return value_; }
  /// 2^-value.
  double probability() const;

  friend bool operator==(const Allele&, const Allele&) = default;

 private:
  std::uint8_t value_;
};

double allele_to_probability(Allele a);

class Genome {
 public:
  /// Uniform genome of the behavior's length filled with `allele`.
  explicit Genome(Behavior behavior, int allele = 0);
  Genome(Behavior behavior, std::vector<std::uint8_t> alleles);

  Behavior behavior() const { return behavior_; }
  std::size_t size() const { return alleles_.size(); }

  std::span<const std::uint8_t> alleles() const { return alleles_; }
  int allele(std::size_t index) const { return alleles_.at(index); }
  void set_allele(std::size_t index, int value);

  /// Move probability for `locus`; throws on behavior mismatch.
  double lookup(const Locus& locus) const;

  friend bool operator==(const Genome&, const Genome&) = default;

 private:
  Behavior behavior_;
  std::vector<std::uint8_t> alleles_;
};

}  // namespace sops
