#include "sops/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sops {

namespace {

using C = Configuration;

inline bool is_particle(std::uint8_t code) { return code >= C::kParticle; }

}  // namespace

// ---------------------------------------------------------------------------
// CommitTable

CommitTable CommitTable::from_genome(const Genome& genome) {
  std::vector<std::uint64_t> t;
  t.reserve(genome.size());
  for (std::uint8_t a : genome.alleles()) {
    t.push_back(a == 0 ? kAlways : std::uint64_t{1} << (64 - a));
  }
  return CommitTable(genome.behavior(), std::move(t));
}

CommitTable CommitTable::from_probabilities(Behavior b, std::span<const double> probabilities) {
  if (probabilities.size() != locus_space_size(b)) {
    throw std::invalid_argument("probability table length does not match the locus space");
  }
  std::vector<std::uint64_t> t;
  t.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("move probabilities must lie in (0, 1]");
    if (p == 1.0) {
      t.push_back(kAlways);
    } else {
      const long double scaled = std::ldexp(static_cast<long double>(p), 64);
      t.push_back(std::max<std::uint64_t>(1, static_cast<std::uint64_t>(scaled)));
    }
  }
  return CommitTable(b, std::move(t));
}

double CommitTable::probability(std::size_t locus) const {
  const std::uint64_t t = thresholds_.at(locus);
  if (t == kAlways) return 1.0;
  return static_cast<double>(std::ldexp(static_cast<long double>(t), -64));
}

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(BehaviorSpec spec, Configuration config, CommitTable table)
    : spec_(spec), config_(std::move(config)), table_(std::move(table)) {
  if (table_.behavior() != spec_.behavior) {
    throw std::invalid_argument("algorithm behavior does not match behavior spec");
  }
  if (config_.particle_count() == 0) throw std::invalid_argument("simulation needs particles");
  const int w = config_.stride();
  const auto delta = [w](Node d) { return d.q + d.r * w; };
  for (int dir = 0; dir < 6; ++dir) {
    const RegionOffsets off = region_offsets(dir);
    DirectionCells& dc = dirs_[dir];
    dc.target = delta(kOffsets[static_cast<std::size_t>(dir)]);
    for (int i = 0; i < 3; ++i) dc.back[i] = delta(off.back[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 2; ++i) dc.middle[i] = delta(off.middle[static_cast<std::size_t>(i)]);
    for (int i = 0; i < 3; ++i) dc.front[i] = delta(off.front[static_cast<std::size_t>(i)]);
  }
  counters_ = tracked_counters(spec_.behavior, scan_counters(config_));
}

std::vector<double> Simulation::quality() const {
  return quality_from_counters(spec_.behavior, counters_, config_.particle_count());
}

namespace {

struct Counts {
  int back = 0, middle = 0, front = 0;
};

template <typename Pred>
inline Counts count_regions(const std::uint8_t* cells, int p, const int* back, const int* middle,
                            const int* front, Pred pred) {
  Counts c;
  c.back = pred(cells[p + back[0]]) + pred(cells[p + back[1]]) + pred(cells[p + back[2]]);
  c.middle = pred(cells[p + middle[0]]) + pred(cells[p + middle[1]]);
  c.front = pred(cells[p + front[0]]) + pred(cells[p + front[1]]) + pred(cells[p + front[2]]);
  return c;
}

inline int light_code(bool lit_here, bool lit_there) {
  if (lit_here == lit_there) return static_cast<int>(LightTransition::Same);
  return static_cast<int>(lit_here ? LightTransition::LitToUnlit : LightTransition::UnlitToLit);
}

inline int agg_index(const Counts& c) { return (c.back * 3 + c.middle) * 4 + c.front; }

inline int pair_index(int b, int m, int f) { return (b * 6 + m) * 10 + f; }

}  // namespace

std::size_t Simulation::fast_locus_index(std::size_t particle, int direction) const {
  const DirectionCells& d = dirs_[direction];
  const std::uint8_t* cells = config_.codes();
  const int p = config_.particle_cell(particle);
  const auto occupied = [](std::uint8_t c) { return is_particle(c) ? 1 : 0; };
  const Counts occ = count_regions(cells, p, d.back, d.middle, d.front, occupied);
  switch (spec_.behavior) {
    case Behavior::Aggregation: return static_cast<std::size_t>(agg_index(occ));
    case Behavior::Phototaxing: {
      const int v = p + d.target;
      const bool here = config_.lit_cell(p, -1);
      const bool there = config_.code(v) == C::kWall ? here : config_.lit_cell(v, p);
      return static_cast<std::size_t>(agg_index(occ) * 3 + light_code(here, there));
    }
    case Behavior::Separation: {
      const std::uint8_t me = cells[p];
      const Counts same =
          count_regions(cells, p, d.back, d.middle, d.front, [me](std::uint8_t c) {
            return c == me ? 1 : 0;
          });
      return static_cast<std::size_t>(pair_index(color_pair_rank(occ.back, same.back),
                                                 color_pair_rank(occ.middle, same.middle),
                                                 color_pair_rank(occ.front, same.front)));
    }
    case Behavior::Coating: {
      const Counts obj =
          count_regions(cells, p, d.back, d.middle, d.front,
                        [](std::uint8_t c) { return c == C::kObject ? 1 : 0; });
      return static_cast<std::size_t>(pair_index(object_pair_rank(3, occ.back, obj.back),
                                                 object_pair_rank(2, occ.middle, obj.middle),
                                                 object_pair_rank(3, occ.front, obj.front)));
    }
  }
  return 0;
}

template <Behavior B>
StepOutcome Simulation::propose_impl(std::size_t particle, int direction, Rng& rng) {
  const DirectionCells& d = dirs_[direction];
  const std::uint8_t* cells = config_.codes();
  const int p = config_.particle_cell(particle);
  const int v = p + d.target;
  const std::uint8_t vcode = cells[v];
  const auto occupied = [](std::uint8_t c) { return is_particle(c) ? 1 : 0; };

  if constexpr (B == Behavior::Separation) {
    const std::uint8_t me = cells[p];
    if (vcode == C::kEmpty) {
      const Counts occ = count_regions(cells, p, d.back, d.middle, d.front, occupied);
      const Counts same = count_regions(cells, p, d.back, d.middle, d.front,
                                        [me](std::uint8_t c) { return c == me ? 1 : 0; });
      const int idx = pair_index(color_pair_rank(occ.back, same.back),
                                 color_pair_rank(occ.middle, same.middle),
                                 color_pair_rank(occ.front, same.front));
      if (!CommitTable::commit(rng, table_.threshold(static_cast<std::size_t>(idx)))) {
        return {MoveKind::Plain, false};
      }
      counters_.edges += occ.front - occ.back;
      counters_.mono_edges += same.front - same.back;
      config_.move_particle_cell(particle, v);
      return {MoveKind::Plain, true};
    }
    if (!is_particle(vcode) || vcode == me) return {MoveKind::Invalid, false};
    // Swap: the neighbor at v is excluded from both extended neighborhoods.
    const Counts occ = count_regions(cells, p, d.back, d.middle, d.front, occupied);
    const Counts mine = count_regions(cells, p, d.back, d.middle, d.front,
                                      [me](std::uint8_t c) { return c == me ? 1 : 0; });
    const Counts theirs = count_regions(cells, p, d.back, d.middle, d.front,
                                        [vcode](std::uint8_t c) { return c == vcode ? 1 : 0; });
    const int forward = pair_index(color_pair_rank(occ.back, mine.back),
                                   color_pair_rank(occ.middle, mine.middle),
                                   color_pair_rank(occ.front, mine.front));
    // Seen from v moving to p, the regions swap roles: back(v,p) = front(p,v).
    const int backward = pair_index(color_pair_rank(occ.front, theirs.front),
                                    color_pair_rank(occ.middle, theirs.middle),
                                    color_pair_rank(occ.back, theirs.back));
    const std::uint64_t t = std::min(table_.threshold(static_cast<std::size_t>(forward)),
                                     table_.threshold(static_cast<std::size_t>(backward)));
    if (!CommitTable::commit(rng, t)) return {MoveKind::Swap, false};
    counters_.mono_edges += mine.front - mine.back + theirs.back - theirs.front;
    config_.swap_particle_cells(p, v);
    return {MoveKind::Swap, true};
  } else {
    if (vcode != C::kEmpty) return {MoveKind::Invalid, false};
    const Counts occ = count_regions(cells, p, d.back, d.middle, d.front, occupied);
    int idx = 0;
    if constexpr (B == Behavior::Aggregation) {
      idx = agg_index(occ);
    } else if constexpr (B == Behavior::Phototaxing) {
      idx = agg_index(occ) * 3 + light_code(config_.lit_cell(p, -1), config_.lit_cell(v, p));
    } else {
      const Counts obj = count_regions(cells, p, d.back, d.middle, d.front,
                                       [](std::uint8_t c) { return c == C::kObject ? 1 : 0; });
      idx = pair_index(object_pair_rank(3, occ.back, obj.back),
                       object_pair_rank(2, occ.middle, obj.middle),
                       object_pair_rank(3, occ.front, obj.front));
    }
    if (!CommitTable::commit(rng, table_.threshold(static_cast<std::size_t>(idx)))) {
      return {MoveKind::Plain, false};
    }
    counters_.edges += occ.front - occ.back;
    if constexpr (B == Behavior::Phototaxing) {
      counters_.height_sum += config_.height_cell(v) - config_.height_cell(p);
    }
    if constexpr (B == Behavior::Coating) {
      const int dp = config_.distance_cell(p);
      const int dv = config_.distance_cell(v);
      counters_.distance_sum += (dv > 0 ? dv : 0) - (dp > 0 ? dp : 0);
      counters_.unreachable += (dv > 0 ? 0 : 1) - (dp > 0 ? 0 : 1);
    }
    config_.move_particle_cell(particle, v);
    return {MoveKind::Plain, true};
  }
}

StepOutcome Simulation::propose(std::size_t particle, int direction, Rng& rng) {
  if (particle >= config_.particle_count() || direction < 0 || direction >= 6) {
    throw std::out_of_range("proposal out of range");
  }
  switch (spec_.behavior) {
    case Behavior::Aggregation: return propose_impl<Behavior::Aggregation>(particle, direction, rng);
    case Behavior::Phototaxing: return propose_impl<Behavior::Phototaxing>(particle, direction, rng);
    case Behavior::Separation: return propose_impl<Behavior::Separation>(particle, direction, rng);
    case Behavior::Coating: return propose_impl<Behavior::Coating>(particle, direction, rng);
  }
  return {};
}

StepOutcome Simulation::step(Rng& rng) {
  const std::uint64_t k = uniform_below(rng, 6 * config_.particle_count());
  return propose(static_cast<std::size_t>(k / 6), static_cast<int>(k % 6), rng);
}

template <Behavior B>
void Simulation::run_impl(Rng& rng, std::uint64_t steps) {
  const std::uint64_t pairs = 6 * config_.particle_count();
  for (std::uint64_t s = 0; s < steps; ++s) {
    const std::uint64_t k = uniform_below(rng, pairs);
    propose_impl<B>(static_cast<std::size_t>(k / 6), static_cast<int>(k % 6), rng);
  }
}

void Simulation::run(Rng& rng, std::uint64_t steps) {
  switch (spec_.behavior) {
    case Behavior::Aggregation: run_impl<Behavior::Aggregation>(rng, steps); break;
    case Behavior::Phototaxing: run_impl<Behavior::Phototaxing>(rng, steps); break;
    case Behavior::Separation: run_impl<Behavior::Separation>(rng, steps); break;
    case Behavior::Coating: run_impl<Behavior::Coating>(rng, steps); break;
  }
}

void step(Configuration& config, const BehaviorSpec& spec, const Genome& genome, Rng& rng) {
  Simulation sim(spec, std::move(config), CommitTable::from_genome(genome));
  sim.step(rng);
  config = sim.configuration();
}

// ---------------------------------------------------------------------------
// Trials

std::uint64_t cubic_steps(int n) {
  if (n < 0) throw std::invalid_argument("negative system size");
  const auto u = static_cast<std::uint64_t>(n);
  return u * u * u;
}

TrialResult run_trial(const BehaviorSpec& spec, const Instance& instance, std::uint64_t steps,
                      const CommitTable& table, Rng& rng, const SnapshotObserver& observer) {
  Simulation sim(spec, random_initialization(spec, instance, rng), table);
  if (observer.every > 0 && observer.on_snapshot) {
    std::uint64_t done = 0;
    observer.on_snapshot(0, sim);
    while (done < steps) {
      const std::uint64_t chunk = std::min(observer.every, steps - done);
      sim.run(rng, chunk);
      done += chunk;
      observer.on_snapshot(done, sim);
    }
  } else {
    sim.run(rng, steps);
  }
  return TrialResult{sim.configuration(), sim.quality()};
}

TrialResult run_trial(const TrialPlan& plan, const CommitTable& table,
                      const SnapshotObserver& observer) {
  Rng rng = make_rng({plan.seed});
  return run_trial(plan.spec, plan.instance, plan.steps, table, rng, observer);
}

}  // namespace sops
