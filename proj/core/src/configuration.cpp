#include "sops/configuration.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace sops {

namespace {

constexpr int kPad = 2;

std::string describe(Node u) {
  return "(" + std::to_string(u.q) + "," + std::to_string(u.r) + ")";
}

}  // namespace

Configuration::Configuration(HexArena arena, std::span<const Node> object)
    : arena_(arena),
      offset_(arena.radius() + kPad),
      stride_(2 * (arena.radius() + kPad) + 1),
      cells_(static_cast<std::size_t>(stride_) * static_cast<std::size_t>(stride_), kWall),
      occupant_(cells_.size(), -1),
      distance_(cells_.size(), -1) {
  for (Node u : arena_.nodes()) cells_[static_cast<std::size_t>(cell_of(u))] = kEmpty;
  for (Node u : object) {
    if (!in_arena(u)) throw std::invalid_argument("object node " + describe(u) + " outside arena");
    auto& c = cells_[static_cast<std::size_t>(cell_of(u))];
    if (c == kObject) throw std::invalid_argument("duplicate object node " + describe(u));
    c = kObject;
    object_.push_back(u);
  }
  if (!object_.empty()) compute_object_distances();
}

bool Configuration::cell_in_grid(Node u) const {
  return u.q + offset_ >= 0 && u.q + offset_ < stride_ && u.r + offset_ >= 0 &&
         u.r + offset_ < stride_;
}

Occupant Configuration::occupant(Node u) const {
  if (!in_arena(u)) return {Occupant::Kind::Outside, 0};
  const std::uint8_t c = code(cell_of(u));
  if (c == kEmpty) return {Occupant::Kind::Empty, 0};
  if (c == kObject) return {Occupant::Kind::Object, 0};
  return {Occupant::Kind::Particle, c - kParticle};
}

bool Configuration::is_empty(Node u) const { return in_arena(u) && code(cell_of(u)) == kEmpty; }

bool Configuration::has_particle(Node u) const {
  return in_arena(u) && code(cell_of(u)) >= kParticle;
}

bool Configuration::is_object(Node u) const {
  return in_arena(u) && code(cell_of(u)) == kObject;
}

std::vector<Node> Configuration::particle_nodes() const {
  std::vector<Node> out;
  out.reserve(particle_cell_.size());
  for (int c : particle_cell_) out.push_back(node_of(c));
  return out;
}

std::vector<std::size_t> Configuration::color_histogram() const {
  std::vector<std::size_t> hist;
  for (std::uint8_t c : particle_color_) {
    if (c >= hist.size()) hist.resize(c + 1u, 0);
    ++hist[c];
  }
  return hist;
}

void Configuration::add_particle(Node u, int color) {
  if (color < 0 || color > kMaxColors) throw std::invalid_argument("particle colour out of range");
  if (!is_empty(u)) {
    throw std::invalid_argument("cannot place particle at " + describe(u) +
                                ": outside arena or occupied");
  }
  const int cell = cell_of(u);
  cells_[static_cast<std::size_t>(cell)] = static_cast<std::uint8_t>(kParticle + color);
  occupant_[static_cast<std::size_t>(cell)] = static_cast<std::int32_t>(particle_cell_.size());
  particle_cell_.push_back(cell);
  particle_color_.push_back(static_cast<std::uint8_t>(color));
}

void Configuration::move_particle(Node from, Node to) {
  if (!has_particle(from)) throw std::invalid_argument("no particle at " + describe(from));
  if (!is_empty(to)) throw std::invalid_argument("target " + describe(to) + " is not empty");
  move_particle_cell(static_cast<std::size_t>(occupant_index(cell_of(from))), cell_of(to));
}

void Configuration::swap_particles(Node a, Node b) {
  if (!has_particle(a) || !has_particle(b)) {
    throw std::invalid_argument("swap requires particles at both nodes");
  }
  swap_particle_cells(cell_of(a), cell_of(b));
}

void Configuration::move_particle_cell(std::size_t particle, int to_cell) {
  const auto from = static_cast<std::size_t>(particle_cell_[particle]);
  const auto to = static_cast<std::size_t>(to_cell);
  cells_[to] = cells_[from];
  cells_[from] = kEmpty;
  occupant_[to] = occupant_[from];
  occupant_[from] = -1;
  particle_cell_[particle] = to_cell;
}

void Configuration::swap_particle_cells(int a, int b) {
  const auto ia = static_cast<std::size_t>(a);
  const auto ib = static_cast<std::size_t>(b);
  std::swap(cells_[ia], cells_[ib]);
  std::swap(occupant_[ia], occupant_[ib]);
  particle_cell_[static_cast<std::size_t>(occupant_[ia])] = a;
  particle_cell_[static_cast<std::size_t>(occupant_[ib])] = b;
}

std::optional<int> Configuration::object_distance(Node u) const {
  if (!in_arena(u)) return std::nullopt;
  const int d = distance_cell(cell_of(u));
  if (d <= 0) return std::nullopt;
  return d;
}

void Configuration::compute_object_distances() {
  std::deque<int> frontier;
  for (Node u : object_) {
    const int c = cell_of(u);
    distance_[static_cast<std::size_t>(c)] = 0;
    frontier.push_back(c);
  }
  while (!frontier.empty()) {
    const int c = frontier.front();
    frontier.pop_front();
    const int d = distance_[static_cast<std::size_t>(c)];
    for (Node off : kOffsets) {
      const int nc = c + off.q + off.r * stride_;
      const auto i = static_cast<std::size_t>(nc);
      if (cells_[i] == kWall || cells_[i] == kObject || distance_[i] >= 0) continue;
      distance_[i] = d + 1;
      frontier.push_back(nc);
    }
  }
}

int Configuration::up_cell(int cell) const {
  const int r = cell / stride_ - offset_;
  return (r & 1) == 0 ? cell + stride_ : cell + stride_ - 1;
}

bool Configuration::lit_cell(int cell, int ignore_cell) const {
  for (int c = up_cell(cell); cells_[static_cast<std::size_t>(c)] != kWall; c = up_cell(c)) {
    if (cells_[static_cast<std::size_t>(c)] >= kParticle && c != ignore_cell) return false;
  }
  return true;
}

bool Configuration::is_lit(Node u, std::optional<Node> ignoring) const {
  if (!in_arena(u)) throw std::invalid_argument("light status queried outside arena");
  return lit_cell(cell_of(u), ignoring ? cell_of(*ignoring) : -1);
}

bool is_connected(std::span<const Node> nodes) {
  if (nodes.empty()) return false;
  std::unordered_set<Node> remaining(nodes.begin(), nodes.end());
  std::vector<Node> stack{nodes.front()};
  remaining.erase(nodes.front());
  while (!stack.empty()) {
    const Node u = stack.back();
    stack.pop_back();
    for (Node w : neighbors(u)) {
      if (remaining.erase(w) != 0) stack.push_back(w);
    }
  }
  return remaining.empty();
}

}  // namespace sops
