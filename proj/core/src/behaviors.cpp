#include "sops/behaviors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sops {

std::vector<double> BehaviorSpec::weights() const {
  switch (behavior) {
    case Behavior::Aggregation: return {1.0};
    case Behavior::Phototaxing: return {0.75, 0.25};
    case Behavior::Separation: return {0.65, 0.35};
    case Behavior::Coating: return {1.0};
  }
  return {1.0};
}

std::vector<Node> hexagon_object(int side) { return HexArena(side).nodes(); }

Instance coating_instance(int rings) {
  if (rings < 1) throw std::invalid_argument("coating instance needs at least one ring");
  return Instance{15 * rings * rings + 3 * rings, hexagon_object(2 * rings + 1)};
}

Instance make_instance(Behavior b, int n) {
  if (n < 1) throw std::invalid_argument("system size must be positive");
  if (b != Behavior::Coating) return Instance{n, {}};
  for (int rings = 1; 15 * rings * rings + 3 * rings <= n; ++rings) {
    if (15 * rings * rings + 3 * rings == n) return coating_instance(rings);
  }
  throw std::invalid_argument("coating size " + std::to_string(n) +
                              " is not 15k^2 + 3k for an integer ring count k");
}

std::vector<int> default_sizes(Behavior b) {
  switch (b) {
    case Behavior::Aggregation:
    case Behavior::Phototaxing: return {61, 169, 271};
    case Behavior::Separation: return {60, 168, 270};
    case Behavior::Coating: return {66, 144, 252};
  }
  return {};
}

std::vector<Instance> default_instances(Behavior b) {
  std::vector<Instance> out;
  for (int n : default_sizes(b)) out.push_back(make_instance(b, n));
  return out;
}

HexArena arena_for(const BehaviorSpec& spec, const Instance& instance) {
  if (instance.n < 1) throw std::invalid_argument("system size must be positive");
  if (!(spec.density > 0.0 && spec.density <= 1.0)) {
    throw std::invalid_argument("density must lie in (0, 1]");
  }
  const auto needed = static_cast<std::size_t>(std::ceil(instance.n / spec.density - 1e-9));
  int extent = 0;
  for (Node u : instance.object) {
    extent = std::max(extent, lattice_distance(u, Node{0, 0}));
  }
  for (int side = extent + 1;; ++side) {
    const std::size_t free = hexagon_number(side) - instance.object.size();
    if (hexagon_number(side) >= instance.object.size() && free >= needed) return HexArena(side);
  }
}

std::vector<Node> load_object_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open object file " + path.string());
  std::vector<Node> nodes;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    Node u;
    if (!(fields >> u.q)) continue;
    std::string rest;
    if (!(fields >> u.r) || (fields >> rest)) {
      throw std::invalid_argument(path.string() + ":" + std::to_string(line_no) +
                                  ": expected \"q r\"");
    }
    nodes.push_back(u);
  }
  std::vector<Node> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("object file lists a node twice");
  }
  if (!is_connected(nodes)) throw std::invalid_argument("object must be non-empty and connected");
  return nodes;
}

// ---------------------------------------------------------------------------

namespace {

int direction_or_throw(Node p, Node v) {
  const int dir = direction_index(v - p);
  if (dir < 0) throw std::invalid_argument("move target must be adjacent to the particle");
  return dir;
}

template <std::size_t N, typename F>
int count_if(const Configuration& config, const std::array<Node, N>& nodes, F pred) {
  int n = 0;
  for (Node u : nodes) n += pred(config.occupant(u)) ? 1 : 0;
  return n;
}

}  // namespace

Locus extract_locus(const BehaviorSpec& spec, const Configuration& config, Node p, Node v) {
  direction_or_throw(p, v);
  const Occupant me = config.occupant(p);
  if (me.kind != Occupant::Kind::Particle) {
    throw std::invalid_argument("locus extraction requires a particle at the origin");
  }
  const ExtendedNeighborhood en = extended_neighborhood(p, v);
  const auto particle = [](const Occupant& o) { return o.kind == Occupant::Kind::Particle; };
  const auto same = [&](const Occupant& o) { return particle(o) && o.color == me.color; };
  const auto object = [](const Occupant& o) { return o.kind == Occupant::Kind::Object; };

  switch (spec.behavior) {
    case Behavior::Aggregation:
      return AggregationLocus{count_if(config, en.back, particle),
                              count_if(config, en.middle, particle),
                              count_if(config, en.front, particle)};
    case Behavior::Phototaxing: {
      const bool lit_here = config.is_lit(p);
      const bool lit_there = config.in_arena(v) ? config.is_lit(v, p) : lit_here;
      LightTransition t = LightTransition::Same;
      if (lit_here && !lit_there) t = LightTransition::LitToUnlit;
      if (!lit_here && lit_there) t = LightTransition::UnlitToLit;
      return PhototaxingLocus{count_if(config, en.back, particle),
                              count_if(config, en.middle, particle),
                              count_if(config, en.front, particle), t};
    }
    case Behavior::Separation:
      return SeparationLocus{
          {count_if(config, en.back, particle), count_if(config, en.back, same)},
          {count_if(config, en.middle, particle), count_if(config, en.middle, same)},
          {count_if(config, en.front, particle), count_if(config, en.front, same)}};
    case Behavior::Coating:
      return CoatingLocus{
          {count_if(config, en.back, particle), count_if(config, en.back, object)},
          {count_if(config, en.middle, particle), count_if(config, en.middle, object)},
          {count_if(config, en.front, particle), count_if(config, en.front, object)}};
  }
  throw std::invalid_argument("unknown behavior");
}

MoveKind is_valid_move(const BehaviorSpec& spec, const Configuration& config, Node p, Node v) {
  if (direction_index(v - p) < 0 || !config.has_particle(p)) return MoveKind::Invalid;
  const Occupant target = config.occupant(v);
  if (target.kind == Occupant::Kind::Empty) return MoveKind::Plain;
  if (spec.behavior == Behavior::Separation && target.kind == Occupant::Kind::Particle &&
      target.color != config.occupant(p).color) {
    return MoveKind::Swap;
  }
  return MoveKind::Invalid;
}

double move_probability(const BehaviorSpec& spec, const ProbabilityFn& algorithm,
                        const Configuration& config, Node p, Node v, MoveKind kind) {
  switch (kind) {
    case MoveKind::Invalid: return 0.0;
    case MoveKind::Plain: return algorithm(extract_locus(spec, config, p, v));
    case MoveKind::Swap:
      return std::min(algorithm(extract_locus(spec, config, p, v)),
                      algorithm(extract_locus(spec, config, v, p)));
  }
  return 0.0;
}

double move_probability(const BehaviorSpec& spec, const Genome& genome,
                        const Configuration& config, Node p, Node v, MoveKind kind) {
  if (genome.behavior() != spec.behavior) {
    throw std::invalid_argument("genome behavior does not match behavior spec");
  }
  return move_probability(
      spec, [&](const Locus& l) { return genome.lookup(l); }, config, p, v, kind);
}

// ---------------------------------------------------------------------------

QualityCounters scan_counters(const Configuration& config) {
  // One representative per undirected edge: (+1,0), (0,+1), (-1,+1).
  constexpr std::array<Node, 3> kHalf = {Node{1, 0}, Node{0, 1}, Node{-1, 1}};
  QualityCounters c;
  const bool has_object = !config.object().empty();
  for (std::size_t i = 0; i < config.particle_count(); ++i) {
    const Node u = config.particle_node(i);
    const int color = config.particle_color(i);
    for (Node d : kHalf) {
      const Occupant o = config.occupant(u + d);
      if (o.kind != Occupant::Kind::Particle) continue;
      ++c.edges;
      if (o.color == color) ++c.mono_edges;
    }
    c.height_sum += config.height(u);
    if (has_object) {
      if (const auto d = config.object_distance(u)) {
        c.distance_sum += *d;
      } else {
        ++c.unreachable;
      }
    }
  }
  return c;
}

QualityCounters tracked_counters(Behavior b, QualityCounters c) {
  if (b != Behavior::Separation) c.mono_edges = 0;
  if (b != Behavior::Phototaxing) c.height_sum = 0;
  if (b != Behavior::Coating) {
    c.distance_sum = 0;
    c.unreachable = 0;
  }
  return c;
}

std::vector<double> quality_from_counters(Behavior b, const QualityCounters& c,
                                          std::size_t particles) {
  const auto e = static_cast<double>(c.edges);
  switch (b) {
    case Behavior::Aggregation: return {e};
    case Behavior::Phototaxing:
      return {e, particles == 0 ? 0.0
                                : static_cast<double>(c.height_sum) /
                                      static_cast<double>(particles)};
    case Behavior::Separation: return {e, static_cast<double>(c.mono_edges)};
    case Behavior::Coating:
      if (c.unreachable > 0 || c.distance_sum <= 0) return {0.0};
      return {1.0 / static_cast<double>(c.distance_sum)};
  }
  return {};
}

std::vector<double> quality(const BehaviorSpec& spec, const Configuration& config) {
  return quality_from_counters(spec.behavior, scan_counters(config), config.particle_count());
}

double normalized_quality(const BehaviorSpec& spec, std::span<const double> q,
                          std::span<const double> q_star) {
  const std::vector<double> w = spec.weights();
  if (q.size() != w.size() || q_star.size() != w.size()) {
    throw std::invalid_argument("quality vector length does not match objective count");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    // A zero optimum (e.g. a single particle has no edges) is met by any configuration.
    const double ratio = q_star[i] > 0.0 ? q[i] / q_star[i] : 1.0;
    total += w[i] * ratio;
  }
  return total;
}

bool light_status(const Configuration& config, Node u, std::optional<Node> ignoring) {
  return config.is_lit(u, ignoring);
}

// ---------------------------------------------------------------------------

std::vector<Node> near_hexagon(int n) {
  if (n < 0) throw std::invalid_argument("near_hexagon needs n >= 0");
  std::vector<Node> out;
  out.reserve(static_cast<std::size_t>(n));
  if (n == 0) return out;
  out.push_back({0, 0});
  // Ring j walk: corners c_i = j * rot(e, i); side i runs from c_i towards
  // c_{i+1} in steps of rot(e, i + 2).  The walk starts one node after c_0
  // and ends on c_0, so a partial ring never begins at a corner.
  for (int j = 1; static_cast<int>(out.size()) < n; ++j) {
    std::vector<Node> ring;
    ring.reserve(static_cast<std::size_t>(6 * j));
    for (int i = 0; i < 6; ++i) {
      const Node corner = rotate(Node{j, 0}, i);
      const Node step = rotate(Node{1, 0}, i + 2);
      for (int m = 0; m < j; ++m) ring.push_back({corner.q + m * step.q, corner.r + m * step.r});
    }
    std::rotate(ring.begin(), ring.begin() + 1, ring.end());
    for (Node u : ring) {
      if (static_cast<int>(out.size()) == n) break;
      out.push_back(u);
    }
  }
  return out;
}

namespace {

void check_capacity(const Configuration& config, int n) {
  const std::size_t free = config.arena().node_count() - config.object().size();
  if (n < 1 || static_cast<std::size_t>(n) > free) {
    throw std::invalid_argument("arena cannot hold " + std::to_string(n) + " particles");
  }
}

std::vector<Node> flush_to_light(std::vector<Node> shape, const HexArena& arena) {
  int max_r = shape.front().r;
  long long r_sum = 0;
  long long q_sum = 0;
  for (Node u : shape) {
    max_r = std::max(max_r, u.r);
    r_sum += u.r;
    q_sum += u.q;
  }
  const int dr = arena.radius() - max_r;
  const auto count = static_cast<long long>(shape.size());
  // Horizontal position is q + r / 2; pick the fitting shift closest to centre.
  std::optional<int> best;
  long long best_offset = 0;
  for (int dq = -2 * arena.side(); dq <= 2 * arena.side(); ++dq) {
    const bool fits = std::all_of(shape.begin(), shape.end(), [&](Node u) {
      return arena.contains({u.q + dq, u.r + dr});
    });
    if (!fits) continue;
    const long long offset = std::llabs(2 * (q_sum + dq * count) + (r_sum + dr * count));
    if (!best || offset < best_offset) {
      best = dq;
      best_offset = offset;
    }
  }
  if (!best) throw std::invalid_argument("phototaxing reference shape does not fit the arena");
  for (Node& u : shape) u = {u.q + *best, u.r + dr};
  return shape;
}

}  // namespace

Configuration optimal_configuration(const BehaviorSpec& spec, const Instance& instance) {
  const HexArena arena = arena_for(spec, instance);
  Configuration config(arena, instance.object);
  check_capacity(config, instance.n);
  const int n = instance.n;

  switch (spec.behavior) {
    case Behavior::Aggregation:
      for (Node u : near_hexagon(n)) config.add_particle(u);
      break;
    case Behavior::Phototaxing:
      for (Node u : flush_to_light(near_hexagon(n), arena)) config.add_particle(u);
      break;
    case Behavior::Separation: {
      if (spec.colors < 1) throw std::invalid_argument("separation needs at least one colour");
      std::vector<Node> nodes = near_hexagon(n);
      std::sort(nodes.begin(), nodes.end());
      const int base = n / spec.colors;
      const int extra = n % spec.colors;
      std::size_t next = 0;
      for (int color = 0; color < spec.colors; ++color) {
        const int band = base + (color < extra ? 1 : 0);
        for (int k = 0; k < band; ++k) config.add_particle(nodes[next++], color);
      }
      break;
    }
    case Behavior::Coating: {
      if (instance.object.empty()) throw std::invalid_argument("coating requires an object");
      std::vector<std::pair<int, Node>> ranked;
      for (Node u : arena.nodes()) {
        if (const auto d = config.object_distance(u)) ranked.emplace_back(*d, u);
      }
      std::sort(ranked.begin(), ranked.end());
      if (ranked.size() < static_cast<std::size_t>(n)) {
        throw std::invalid_argument("not enough reachable nodes around the object");
      }
      for (int k = 0; k < n; ++k) config.add_particle(ranked[static_cast<std::size_t>(k)].second);
      break;
    }
  }
  return config;
}

Configuration random_initialization(const BehaviorSpec& spec, const Instance& instance,
                                    Rng& rng) {
  if (spec.behavior == Behavior::Coating && instance.object.empty()) {
    throw std::invalid_argument("coating requires an object");
  }
  const HexArena arena = arena_for(spec, instance);
  Configuration config(arena, instance.object);
  check_capacity(config, instance.n);

  std::vector<Node> free;
  free.reserve(arena.node_count());
  for (Node u : arena.nodes()) {
    if (!config.is_object(u)) free.push_back(u);
  }
  const auto n = static_cast<std::size_t>(instance.n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + uniform_below(rng, free.size() - i);
    std::swap(free[i], free[j]);
  }

  std::vector<int> colors(n, 0);
  if (spec.behavior == Behavior::Separation) {
    if (spec.colors < 1) throw std::invalid_argument("separation needs at least one colour");
    const auto c = static_cast<std::size_t>(spec.colors);
    for (std::size_t i = 0; i < n; ++i) colors[i] = static_cast<int>(i % c);
    for (std::size_t i = n; i > 1; --i) {
      std::swap(colors[i - 1], colors[uniform_below(rng, i)]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) config.add_particle(free[i], colors[i]);
  return config;
}

}  // namespace sops
