#pragma once

// Hand-rolled generators for property tests.  Everything is driven by an
// explicit seed so a failing case can be replayed from the test output.

#include <cstdint>
#include <vector>

#include "sops/behaviors.hpp"
#include "sops/genome.hpp"
#include "sops/rng.hpp"

namespace sops::testkit {

inline Genome random_genome(Behavior b, Rng& rng) {
  std::vector<std::uint8_t> alleles(locus_space_size(b));
  for (auto& a : alleles) a = static_cast<std::uint8_t>(uniform_below(rng, kMaxAllele + 1));
  return Genome(b, std::move(alleles));
}

/// Genome biased towards small alleles so that moves actually commit often.
inline Genome mobile_genome(Behavior b, Rng& rng) {
  std::vector<std::uint8_t> alleles(locus_space_size(b));
  for (auto& a : alleles) a = static_cast<std::uint8_t>(uniform_below(rng, 4));
  return Genome(b, std::move(alleles));
}

inline Node random_node(const HexArena& arena, Rng& rng) {
  const int k = arena.radius();
  for (;;) {
    Node u{static_cast<int>(uniform_below(rng, 2 * k + 1)) - k,
           static_cast<int>(uniform_below(rng, 2 * k + 1)) - k};
    if (arena.contains(u)) return u;
  }
}

/// Random connected object grown from the origin by accretion.
inline std::vector<Node> random_object(int size, int max_radius, Rng& rng) {
  std::vector<Node> object{Node{0, 0}};
  const HexArena bound(max_radius + 1);
  while (static_cast<int>(object.size()) < size) {
    const Node base = object[uniform_below(rng, object.size())];
    const Node u = base + kOffsets[uniform_below(rng, 6)];
    if (!bound.contains(u)) continue;
    bool seen = false;
    for (Node w : object) seen = seen || w == u;
    if (!seen) object.push_back(u);
  }
  return object;
}

/// Behavior spec and instance of a small random system for soaks.
struct SmallSystem {
  BehaviorSpec spec;
  Instance instance;
};

inline SmallSystem small_system(Behavior b, Rng& rng) {
  SmallSystem s{BehaviorSpec{b}, Instance{}};
  s.instance.n = 5 + static_cast<int>(uniform_below(rng, 40));
  if (b == Behavior::Separation) s.spec.colors = 2 + static_cast<int>(uniform_below(rng, 3));
  if (b == Behavior::Coating) {
    s.instance.object = random_object(1 + static_cast<int>(uniform_below(rng, 12)), 3, rng);
  }
  return s;
}

}  // namespace sops::testkit
