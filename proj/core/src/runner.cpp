#include "sops/runner.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "params_json.hpp"
#include "sops/genome_io.hpp"

namespace sops {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Maps the library's exception types to exit codes.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

std::string read_config_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Genome load_genome_io(const fs::path& path) {
  try {
    return load_genome(path);
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

RunConfig resolve_run_config(const EvolveOptions& o) {
  json file;
  if (o.config_file) {
    try {
      file = json::parse(read_config_text(*o.config_file));
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("config file does not parse: " + std::string(e.what()));
    }
    if (!file.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      if (!detail::is_params_key(key) && key != "out" && key != "threads") {
        throw std::invalid_argument("unknown config key \"" + key + "\"");
      }
    }
  }

  Behavior behavior;
  if (o.behavior) {
    const auto b = parse_behavior(*o.behavior);
    if (!b) throw std::invalid_argument("unknown behavior \"" + *o.behavior + "\"");
    behavior = *b;
  } else if (file.contains("behavior")) {
    behavior = detail::behavior_from_json(file);
  } else {
    throw std::invalid_argument("a behavior is required (--behavior or config file)");
  }

  RunConfig cfg;
  cfg.params = EvolutionParams::defaults(behavior);
  detail::merge_params(cfg.params, file);
  try {
    if (file.contains("out")) cfg.out = file.at("out").get<std::string>();
    if (file.contains("threads")) cfg.threads = file.at("threads").get<unsigned>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }

  EvolutionParams& p = cfg.params;
  if (o.population) p.population = *o.population;
  if (o.generations) p.generations = *o.generations;
  if (o.mutation_rate) p.mutation_rate = *o.mutation_rate;
  if (o.hypermutation) {
    if (*o.hypermutation == 0.0) {
      p.hypermutation.reset();
    } else {
      p.hypermutation = *o.hypermutation;
    }
  }
  if (o.diversity_low) p.diversity_low = *o.diversity_low;
  if (o.diversity_high) p.diversity_high = *o.diversity_high;
  if (o.sizes) p.sizes = *o.sizes;
  if (o.trials) p.trials = *o.trials;
  if (o.seed) p.seed = *o.seed;
  if (o.colors) p.colors = *o.colors;
  if (o.out) cfg.out = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  p.validate();
  for (int n : p.sizes) static_cast<void>(make_instance(p.behavior, n));
  return cfg;
}

EvolutionSummary run_evolution(const RunConfig& config, bool resume,
                               const std::function<void(const GenerationStats&)>& progress) {
  const EvolutionParams& params = config.params;
  std::optional<RunArchive> archive;
  if (!config.out.empty()) {
    if (resume) {
      archive = RunArchive::resume(config.out, params);
    } else {
      archive = RunArchive::create(config.out, params);
    }
  }

  EvolutionEngine engine(params, config.threads);
  EvolutionSummary summary;
  const auto record = [&](const Population& pop, int generation) {
    const GenerationStats s = engine.stats(pop, generation);
    if (archive) archive->append(pop, s);
    summary.stats.push_back(s);
    for (const Individual& ind : pop.members) {
      if (!summary.best_genome || ind.fitness > summary.best_fitness) {
        summary.best_fitness = ind.fitness;
        summary.best_genome = ind.genome;
      }
    }
    if (progress) progress(s);
  };

  Population pop;
  int start = 1;
  if (archive && archive->last_generation() >= 0) {
    const int last = archive->last_generation();
    if (last > params.generations) {
      throw std::invalid_argument("archive already extends past the requested generation count");
    }
    for (const ArchivedIndividual& ind : archive->last_population()) {
      pop.members.push_back(
          Individual{Genome(params.behavior, ind.alleles), ind.fitness, ind.evaluation_key});
    }
    const GenerationStats& s = archive->stats().back();
    pop.diversity = s.diversity;
    pop.mutation_rate = s.mutation_rate;
    pop.hypermutating = params.hypermutation.has_value() && s.mutation_rate != params.mutation_rate;
    engine.restore_controller(pop.hypermutating);
    summary.stats = archive->stats();
    const auto& best = archive->hall_of_fame().front();
    summary.best_fitness = best.fitness;
    summary.best_genome = Genome(params.behavior, best.alleles);
    start = last + 1;
  } else {
    pop = engine.initial_population();
    record(pop, 0);
  }
  for (int g = start; g <= params.generations; ++g) {
    pop = engine.run_generation(pop, g);
    record(pop, g);
  }
  return summary;
}

int cmd_evolve(const EvolveOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = resolve_run_config(options);
    if (cfg.out.empty()) {
      cfg.out = "run-" + std::string(behavior_short_name(cfg.params.behavior)) + "-" +
                std::to_string(cfg.params.seed);
    }
    if (!options.resume && RunArchive::exists(cfg.out)) {
      throw std::invalid_argument(cfg.out.string() +
                                  " already holds a run archive; pass --resume to continue it");
    }
    out << "evolving " << behavior_name(cfg.params.behavior) << " P=" << cfg.params.population
        << " G=" << cfg.params.generations << " M=" << cfg.params.mutation_rate
        << " seed=" << cfg.params.seed << " -> " << cfg.out.string() << "\n";
    const EvolutionSummary summary = run_evolution(cfg, options.resume, [&](const auto& s) {
      out << format_stats_row(s) << "\n" << std::flush;
    });
    out << "best_fitness " << summary.best_fitness << "\n";
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------

LoadedAlgorithm load_algorithm(const AlgorithmChoice& choice) {
  if (choice.genome.has_value() == choice.baseline.has_value()) {
    throw std::invalid_argument("exactly one of --genome and --baseline is required");
  }
  if (choice.genome) {
    Genome g = load_genome_io(*choice.genome);
    return LoadedAlgorithm{g.behavior(), CommitTable::from_genome(g), g, std::nullopt,
                           "genome " + choice.genome->string()};
  }
  std::optional<ClosedFormAlgorithm> alg;
  if (*choice.baseline == "li") {
    alg = ClosedFormAlgorithm::li(choice.lambda);
  } else if (*choice.baseline == "threshold") {
    alg = ClosedFormAlgorithm::simple_threshold(choice.e_max, choice.p_low);
  } else {
    throw std::invalid_argument("unknown baseline \"" + *choice.baseline + "\" (li|threshold)");
  }
  return LoadedAlgorithm{Behavior::Aggregation, alg->commit_table(), std::nullopt, alg,
                         alg->describe()};
}

EvaluateResult run_evaluate(const EvaluateOptions& o) {
  const LoadedAlgorithm alg = load_algorithm(o.algorithm);
  BehaviorSpec spec{alg.behavior};
  spec.colors = o.colors;
  if (o.colors < 1 || o.colors > Configuration::kMaxColors) {
    throw std::invalid_argument("colour count out of range");
  }
  const std::vector<int> sizes = o.sizes.value_or(default_sizes(alg.behavior));
  if (sizes.empty()) throw std::invalid_argument("at least one size is required");
  std::vector<Instance> instances;
  for (int n : sizes) {
    if (n < 1) throw std::invalid_argument("sizes must be positive");
    instances.push_back(make_instance(alg.behavior, n));
  }
  FitnessSetup setup(spec, std::move(instances), o.trials);
  setup.set_steps_override(o.steps);

  EvaluateResult result;
  result.description = alg.description;
  result.sizes = sizes;
  const std::uint64_t key = o.evaluation_key.value_or(derive_key({o.seed}));
  result.report = evaluate_fitness(alg.table, setup, key, resolve_threads(o.threads));
  double sum = 0.0;
  for (const auto& t : result.report.trials) sum += t.normalized;
  const double count = static_cast<double>(result.report.trials.size());
  result.mean_normalized = sum / count;
  double var = 0.0;
  for (const auto& t : result.report.trials) {
    var += (t.normalized - result.mean_normalized) * (t.normalized - result.mean_normalized);
  }
  result.std_normalized = std::sqrt(var / count);
  return result;
}

int cmd_evaluate(const EvaluateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const EvaluateResult r = run_evaluate(options);
    char buf[128];
    out << "# " << r.description << "\n";
    out << "n,trial,normalized\n";
    for (const auto& t : r.report.trials) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", r.sizes[t.instance], t.trial, t.normalized);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "# fitness %.17g\n# mean %.6f std %.6f trials %zu\n",
                  r.report.fitness, r.mean_normalized, r.std_normalized, r.report.trials.size());
    out << buf;
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------

ScaleRunResult run_scale(const ScaleRunOptions& o, std::ostream* snapshots) {
  const LoadedAlgorithm alg = load_algorithm(o.algorithm);
  if (o.n < 1) throw std::invalid_argument("--n must be positive");
  BehaviorSpec spec{alg.behavior};
  spec.colors = o.colors;
  if (o.colors < 1 || o.colors > Configuration::kMaxColors) {
    throw std::invalid_argument("colour count out of range");
  }

  Instance instance{o.n, {}};
  if (o.object_file) {
    if (alg.behavior != Behavior::Coating) {
      throw std::invalid_argument("--object only applies to coating");
    }
    try {
      instance.object = load_object_file(*o.object_file);
    } catch (const std::invalid_argument&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw IoError(e.what());
    }
  } else if (alg.behavior == Behavior::Coating) {
    instance = make_instance(alg.behavior, o.n);
  }

  const std::vector<double> reference = quality(spec, optimal_configuration(spec, instance));
  const std::uint64_t steps = o.steps.value_or(cubic_steps(o.n));

  ScaleRunResult result;
  result.steps = steps;
  SnapshotObserver observer;
  const auto emit = [&](std::uint64_t step, const Simulation& sim) {
    const std::vector<double> q = sim.quality();
    const double norm = normalized_quality(spec, q, reference);
    result.trajectory.emplace_back(step, norm);
    if (snapshots == nullptr) return;
    const Configuration& c = sim.configuration();
    json j;
    j["step"] = step;
    j["quality"] = q;
    j["normalized"] = norm;
    json nodes = json::array();
    for (std::size_t i = 0; i < c.particle_count(); ++i) {
      const Node u = c.particle_node(i);
      nodes.push_back({u.q, u.r, c.particle_color(i)});
    }
    j["nodes"] = std::move(nodes);
    if (step == 0) {
      j["arena_side"] = c.arena().side();
      json object = json::array();
      for (const Node u : c.object()) object.push_back({u.q, u.r});
      j["object"] = std::move(object);
    }
    *snapshots << j.dump() << "\n";
  };
  observer.every = o.snapshot_every > 0 ? o.snapshot_every : steps;
  observer.on_snapshot = emit;

  Rng rng = make_rng({o.seed});
  TrialResult r = run_trial(spec, instance, steps, alg.table, rng, observer);
  result.quality = r.quality;
  result.normalized = normalized_quality(spec, r.quality, reference);
  if (snapshots != nullptr) snapshots->flush();
  return result;
}

int cmd_scale_run(const ScaleRunOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::ofstream file;
    std::ostream* snapshots = &out;
    std::ostream* summary = &err;
    if (options.out) {
      file.open(*options.out, std::ios::binary | std::ios::trunc);
      if (!file) throw IoError("cannot write " + options.out->string());
      snapshots = &file;
      summary = &out;
    }
    const ScaleRunResult r = run_scale(options, options.snapshot_every > 0 || options.out
                                                    ? snapshots
                                                    : nullptr);
    if (file.is_open() && !file) throw IoError("write failed for " + options.out->string());
    char buf[96];
    std::snprintf(buf, sizeof buf, "steps %llu normalized %.6f\n",
                  static_cast<unsigned long long>(r.steps), r.normalized);
    *summary << buf;
    return static_cast<int>(kExitOk);
  });
}

// ---------------------------------------------------------------------------

int cmd_bins(const AlgorithmChoice& algorithm, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LoadedAlgorithm alg = load_algorithm(algorithm);
    if (alg.behavior != Behavior::Aggregation) {
      throw std::invalid_argument("bins are defined for aggregation genomes");
    }
    const auto bins = alg.genome ? genome_to_bins(*alg.genome) : algorithm_to_bins(*alg.closed_form);
    out << "e,locus,probability\n";
    char buf[96];
    for (const auto& [e, entries] : bins) {
      for (const LocusBinEntry& entry : entries) {
        std::snprintf(buf, sizeof buf, "%d,%zu,%.17g\n", e, entry.locus, entry.probability);
        out << buf;
      }
    }
    return static_cast<int>(kExitOk);
  });
}

}  // namespace sops
