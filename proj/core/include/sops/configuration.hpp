#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sops/lattice.hpp"

namespace sops {

/// What sits on a lattice node.
struct Occupant {
  enum class Kind : std::uint8_t { Empty, Particle, Object, Outside };
  Kind kind = Kind::Empty;
  int color = 0;  // meaningful for particles only

  friend bool operator==(const Occupant&, const Occupant&) = default;
};

/// The state of one particle system: a hexagonal arena, optional object
/// nodes and the particles (with colours).
///
/// Storage is a padded dense grid so that every node of an extended
/// neighborhood of an arena node has a cell; padding cells read as walls.
/// Particles live in a dense array so that uniform selection is O(1).
///
/// The light wall sits just beyond the arena side r = side - 1 and extends
/// along that lattice line.  Rays run perpendicular to it along zigzag
/// columns with exactly one node per row, so a node's height is its row
/// counted from the opposite side (1-based).
class Configuration {
 public:
  static constexpr std::uint8_t kEmpty = 0;
  static constexpr std::uint8_t kWall = 1;
  static constexpr std::uint8_t kObject = 2;
  static constexpr std::uint8_t kParticle = 3;  // particle of colour c has code kParticle + c
  static constexpr int kMaxColors = 255 - kParticle;

  explicit Configuration(HexArena arena, std::span<const Node> object = {});

  const HexArena& arena() const { return arena_; }
  bool in_arena(Node u) const { return arena_.contains(u); }

  Occupant occupant(Node u) const;
  bool is_empty(Node u) const;
  bool has_particle(Node u) const;
  bool is_object(Node u) const;

  std::size_t particle_count() const { return particle_cell_.size(); }
  Node particle_node(std::size_t i) const { return node_of(particle_cell_[i]); }
  int particle_color(std::size_t i) const { return particle_color_[i]; }
  std::vector<Node> particle_nodes() const;
  /// Colour count per colour index (size = max colour + 1).
  std::vector<std::size_t> color_histogram() const;

  /// Throws std::invalid_argument if u is outside the arena or occupied.
  void add_particle(Node u, int color = 0);
  /// Moves the particle at `from` onto the empty node `to`.
  void move_particle(Node from, Node to);
  /// Exchanges the particles at a and b.
  void swap_particles(Node a, Node b);

  std::span<const Node> object() const { return object_; }

  /// Hop distance from u to the object through non-object nodes; nullopt
  /// without an object, for object nodes and for unreachable nodes.
  std::optional<int> object_distance(Node u) const;

  /// 1-based row height towards the light wall.
  int height(Node u) const { return u.r + arena_.side(); }

  /// Lit iff no particle other than `ignoring` lies between u and the light
  /// wall on u's ray.
  bool is_lit(Node u, std::optional<Node> ignoring = std::nullopt) const;

  // ---- cell-level access (hot paths) ------------------------------------

  int stride() const { return stride_; }
  int cell_of(Node u) const { return (u.r + offset_) * stride_ + (u.q + offset_); }
  Node node_of(int cell) const { return {cell % stride_ - offset_, cell / stride_ - offset_}; }
  bool cell_in_grid(Node u) const;

  std::uint8_t code(int cell) const { return cells_[static_cast<std::size_t>(cell)]; }
  const std::uint8_t* codes() const { return cells_.data(); }
  int particle_cell(std::size_t i) const { return particle_cell_[i]; }
  int occupant_index(int cell) const { return occupant_[static_cast<std::size_t>(cell)]; }
  /// Per-cell object distance, -1 where undefined.
  int distance_cell(int cell) const { return distance_[static_cast<std::size_t>(cell)]; }
  int height_cell(int cell) const { return cell / stride_ - offset_ + arena_.side(); }

  void move_particle_cell(std::size_t particle, int to_cell);
  void swap_particle_cells(int a, int b);
  bool lit_cell(int cell, int ignore_cell) const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.arena_.side() == b.arena_.side() && a.cells_ == b.cells_ &&
           a.particle_cell_ == b.particle_cell_ && a.particle_color_ == b.particle_color_;
  }

 private:
  void compute_object_distances();
  int up_cell(int cell) const;

  HexArena arena_;
  int offset_;
  int stride_;
  std::vector<std::uint8_t> cells_;
  std::vector<std::int32_t> occupant_;
  std::vector<std::int32_t> particle_cell_;
  std::vector<std::uint8_t> particle_color_;
  std::vector<Node> object_;
  std::vector<std::int32_t> distance_;
};

/// True iff `nodes` is non-empty and connected under lattice adjacency.
bool is_connected(std::span<const Node> nodes);

}  // namespace sops
