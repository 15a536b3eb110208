#include "sops/lattice.hpp"

#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sops {

std::ostream& operator<<(std::ostream& out, const Node& n) {
  return out << '(' << n.q << ',' << n.r << ')';
}

std::array<Node, 6> neighbors(Node u) {
  std::array<Node, 6> out{};
  for (std::size_t i = 0; i < kOffsets.size(); ++i) out[i] = u + kOffsets[i];
  return out;
}

int direction_index(Node d) {
  for (std::size_t i = 0; i < kOffsets.size(); ++i) {
    if (kOffsets[i] == d) return static_cast<int>(i);
  }
  return -1;
}

bool adjacent(Node a, Node b) { return direction_index(b - a) >= 0; }

int lattice_distance(Node a, Node b) {
  const Node d = b - a;
  return (std::abs(d.q) + std::abs(d.r) + std::abs(d.q + d.r)) / 2;
}

HexArena::HexArena(int side) : side_(side) {
  if (side < 1) {
    throw std::invalid_argument("hex arena side must be >= 1, got " +
                                std::to_string(side));
  }
}

std::size_t HexArena::node_count() const { return hexagon_number(side_); }

std::vector<Node> HexArena::nodes() const {
  std::vector<Node> out;
  out.reserve(node_count());
  const int k = side_ - 1;
  for (int q = -k; q <= k; ++q) {
    for (int r = -k; r <= k; ++r) {
      if (contains({q, r})) out.push_back({q, r});
    }
  }
  return out;
}

HexArena hex_arena(int side) { return HexArena(side); }

RegionOffsets region_offsets(int direction) {
  if (direction < 0 || direction >= 6) {
    throw std::invalid_argument("direction index out of range");
  }
  const Node d = kOffsets[static_cast<std::size_t>(direction)];
  RegionOffsets out{};
  out.middle = {rotate(d, 1), rotate(d, -1)};
  out.back = {rotate(d, 2), rotate(d, 3), rotate(d, 4)};
  out.front = {d + rotate(d, 5), d + d, d + rotate(d, 1)};
  return out;
}

ExtendedNeighborhood extended_neighborhood(Node p, Node v) {
  const int dir = direction_index(v - p);
  if (dir < 0) {
    throw std::invalid_argument("extended neighborhood requires adjacent nodes");
  }
  const RegionOffsets off = region_offsets(dir);
  ExtendedNeighborhood out{};
  out.origin = p;
  out.target = v;
  for (std::size_t i = 0; i < 3; ++i) out.back[i] = p + off.back[i];
  for (std::size_t i = 0; i < 2; ++i) out.middle[i] = p + off.middle[i];
  for (std::size_t i = 0; i < 3; ++i) out.front[i] = p + off.front[i];
  return out;
}

}  // namespace sops
