#pragma once

// Triangular-lattice geometry in axial coordinates.
//
// The six unit offsets, in their canonical order, are
//   (+1,0) (-1,0) (0,+1) (0,-1) (+1,-1) (-1,+1).
// A 60 degree counter-clockwise rotation is the exact integer map
//   (q, r) -> (-r, q + r).

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

namespace sops {

struct Node {
  int q = 0;
  int r = 0;

  friend constexpr bool operator==(const Node&, const Node&) = default;
  friend constexpr auto operator<=>(const Node&, const Node&) = default;

  constexpr Node operator+(const Node& o) const { return {q + o.q, r + o.r}; }
  constexpr Node operator-(const Node& o) const { return {q - o.q, r - o.r}; }
};

std::ostream& operator<<(std::ostream& out, const Node& n);

inline constexpr std::array<Node, 6> kOffsets = {
    Node{1, 0}, Node{-1, 0}, Node{0, 1}, Node{0, -1}, Node{1, -1}, Node{-1, 1}};

/// Rotates a lattice vector by `sixths` * 60 degrees counter-clockwise.
constexpr Node rotate(Node d, int sixths) {
  sixths = ((sixths % 6) + 6) % 6;
  for (int i = 0; i < sixths; ++i) d = Node{-d.r, d.q + d.r};
  return d;
}

std::array<Node, 6> neighbors(Node u);

bool adjacent(Node a, Node b);

/// Hop distance on the lattice.
int lattice_distance(Node a, Node b);

/// Index of `d` in kOffsets, or -1 if `d` is not a unit offset.
int direction_index(Node d);

/// Regular hexagon of `side` nodes per side centred at the origin.
class HexArena {
 public:
  explicit HexArena(int side);

  int side() const { return side_; }
  int radius() const { return side_ - 1; }

  std::size_t node_count() const;

  bool contains(Node u) const {
    const int k = side_ - 1;
    return u.q <= k && u.q >= -k && u.r <= k && u.r >= -k && u.q + u.r <= k &&
           u.q + u.r >= -k;
  }

  /// All nodes in (q, r) lexicographic order.
  std::vector<Node> nodes() const;

 private:
  int side_;
};

HexArena hex_arena(int side);

/// 3s^2 - 3s + 1.
constexpr std::size_t hexagon_number(int side) {
  const auto s = static_cast<std::size_t>(side);
  return side <= 0 ? 0 : 3 * s * s - 3 * s + 1;
}

/// The eight nodes around a proposed move p -> v, split into the three nodes
/// adjacent only to p (back), the two adjacent to both (middle) and the three
/// adjacent only to v (front).
///
/// With d = v - p the order is fixed:
///   middle = p + rot(d, +60), p + rot(d, -60)
///   back   = p + rot(d, 120), p + rot(d, 180), p + rot(d, 240)
///   front  = v + rot(d, 300), v + d,           v + rot(d, 60)
/// so that back(p, v) lists the same nodes as front(v, p), in the same order.
struct ExtendedNeighborhood {
  Node origin;
  Node target;
  std::array<Node, 3> back;
  std::array<Node, 2> middle;
  std::array<Node, 3> front;

  std::array<Node, 8> all() const {
    return {back[0], back[1], back[2], middle[0], middle[1],
            front[0], front[1], front[2]};
  }
};

ExtendedNeighborhood extended_neighborhood(Node p, Node v);

/// Offsets relative to p for each region, for every direction index.
struct RegionOffsets {
  std::array<Node, 3> back;
  std::array<Node, 2> middle;
  std::array<Node, 3> front;
};

RegionOffsets region_offsets(int direction);

}  // namespace sops

template <>
struct std::hash<sops::Node> {
  std::size_t operator()(const sops::Node& n) const noexcept {
    return std::hash<long long>{}((static_cast<long long>(n.q) << 32) ^
                                  static_cast<unsigned>(n.r));
  }
};
