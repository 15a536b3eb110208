#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <vector>

#include "sops/configuration.hpp"
#include "sops/genome.hpp"
#include "sops/lattice.hpp"
#include "sops/rng.hpp"

namespace sops {

/// Behavior-wide settings shared by every instance of a fitness evaluation.
struct BehaviorSpec {
  Behavior behavior = Behavior::Aggregation;
  int colors = 3;        // separation only
  double density = 0.5;  // target particle density of random initialisations

  /// Objective weights w_i, summing to one.
  std::vector<double> weights() const;
  std::size_t objectives() const { return weights().size(); }
};

/// One system size of a fitness evaluation.  `object` is only used by
/// coating and must be connected.
struct Instance {
  int n = 0;
  std::vector<Node> object;
};

/// Nodes of a regular hexagon of `side` centred at the origin.
std::vector<Node> hexagon_object(int side);

/// Coating instance with `rings` full layers around a hexagonal object of
/// side 2 * rings + 1: n = 15 rings^2 + 3 rings (66, 144, 252 for 2, 3, 4).
Instance coating_instance(int rings);

/// Instance for system size n.  Coating sizes must be of the form above.
Instance make_instance(Behavior b, int n);

/// Default evaluation sizes: {61,169,271}, {61,169,271}, {60,168,270}, {66,144,252}.
std::vector<int> default_sizes(Behavior b);
std::vector<Instance> default_instances(Behavior b);

/// Smallest hexagonal arena holding the object with at least n / density
/// free nodes.
HexArena arena_for(const BehaviorSpec& spec, const Instance& instance);

/// Reads "q r" pairs (one per line, '#' comments allowed) and checks
/// connectivity.  Throws std::runtime_error on I/O failure and
/// std::invalid_argument on malformed or disconnected objects.
std::vector<Node> load_object_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Moves

enum class MoveKind : std::uint8_t { Invalid, Plain, Swap };

/// Locus of the extended neighborhood N(p, v) as seen by the particle at p.
/// Throws std::invalid_argument if p holds no particle or v is not adjacent.
Locus extract_locus(const BehaviorSpec& spec, const Configuration& config, Node p, Node v);

MoveKind is_valid_move(const BehaviorSpec& spec, const Configuration& config, Node p, Node v);

/// A stochastic algorithm viewed as a map from loci to move probabilities.
using ProbabilityFn = std::function<double(const Locus&)>;

/// Probability of committing the valid move p -> v.  Swap moves use the
/// smaller of the two directional probabilities.
double move_probability(const BehaviorSpec& spec, const ProbabilityFn& algorithm,
                        const Configuration& config, Node p, Node v, MoveKind kind);
double move_probability(const BehaviorSpec& spec, const Genome& genome,
                        const Configuration& config, Node p, Node v, MoveKind kind);

// ---------------------------------------------------------------------------
// Quality

/// Raw scan-derived sums underlying every quality measure.
struct QualityCounters {
  std::int64_t edges = 0;          // occupied-occupied lattice edges, e
  std::int64_t mono_edges = 0;     // same-colour edges, h
  std::int64_t height_sum = 0;     // sum of particle heights
  std::int64_t distance_sum = 0;   // sum of object distances
  std::int64_t unreachable = 0;    // particles without an object distance

  friend bool operator==(const QualityCounters&, const QualityCounters&) = default;
};

/// Full re-scan of the configuration.
QualityCounters scan_counters(const Configuration& config);

/// The fields a behavior's simulation keeps up to date (edges always,
/// plus h, the height sum or the distance sums); the rest are zeroed.
QualityCounters tracked_counters(Behavior b, QualityCounters c);

/// [e] | [e, mean height] | [e, h] | [1 / sum d_o]
std::vector<double> quality_from_counters(Behavior b, const QualityCounters& c,
                                          std::size_t particles);
std::vector<double> quality(const BehaviorSpec& spec, const Configuration& config);

/// sum_i w_i * q_i / q*_i
double normalized_quality(const BehaviorSpec& spec, std::span<const double> q,
                          std::span<const double> q_star);

/// Lit/unlit status (phototaxing).
bool light_status(const Configuration& config, Node u, std::optional<Node> ignoring = {});

// ---------------------------------------------------------------------------
// Reference configurations

/// n nodes forming the largest full hexagon centred at the origin followed
/// by a contiguous run around the next ring.
std::vector<Node> near_hexagon(int n);

/// Deterministic (near-)optimal configuration used to normalise quality.
/// Throws std::invalid_argument if the arena cannot hold n particles.
Configuration optimal_configuration(const BehaviorSpec& spec, const Instance& instance);

/// n particles on distinct uniform free nodes of arena_for(spec, instance).
/// Separation colours are an evenly sized multiset shuffled onto particles.
Configuration random_initialization(const BehaviorSpec& spec, const Instance& instance,
                                    Rng& rng);

}  // namespace sops
