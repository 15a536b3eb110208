// sops: evolve, evaluate and scale-run stochastic particle-system algorithms.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sops/runner.hpp"

namespace {

void add_algorithm_flags(CLI::App* cmd, sops::AlgorithmChoice& alg) {
  cmd->add_option("--genome", alg.genome, "Genome JSON file");
  cmd->add_option("--baseline", alg.baseline, "Closed-form baseline: li | threshold");
  cmd->add_option("--lambda", alg.lambda, "li: bias lambda")->capture_default_str();
  cmd->add_option("--emax", alg.e_max, "threshold: largest neighbor count that always moves")
      ->capture_default_str();
  cmd->add_option("--plow", alg.p_low, "threshold: move probability above e_max")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evolve and run stochastic self-organizing particle-system algorithms"};
  app.set_version_flag("--version", SOPS_VERSION);
  app.require_subcommand(1);

  sops::EvolveOptions evolve;
  auto* ev = app.add_subcommand("evolve", "Run the genetic algorithm and archive every generation");
  ev->add_option("--behavior", evolve.behavior, "agg | ptx | sep | coat");
  ev->add_option("--config", evolve.config_file, "JSON config file; flags override its values");
  ev->add_option("--pop", evolve.population, "Population size P");
  ev->add_option("--gens", evolve.generations, "Generation count G");
  ev->add_option("--mut", evolve.mutation_rate, "Per-gene mutation rate M");
  ev->add_option("--hyper", evolve.hypermutation, "Hypermutation factor H (0 disables)");
  ev->add_option("--div-low", evolve.diversity_low, "Diversity that enables hypermutation");
  ev->add_option("--div-high", evolve.diversity_high, "Diversity that disables hypermutation");
  ev->add_option("--sizes", evolve.sizes, "Evaluation system sizes")->delimiter(',');
  ev->add_option("--trials", evolve.trials, "Trials per size T");
  ev->add_option("--colors", evolve.colors, "Separation colour count");
  ev->add_option("--seed", evolve.seed, "Master seed");
  ev->add_option("--out", evolve.out, "Archive directory");
  ev->add_option("--threads", evolve.threads, "Worker threads (0 = all cores)");
  ev->add_flag("--resume", evolve.resume, "Continue an existing archive");

  sops::EvaluateOptions evaluate;
  auto* eva = app.add_subcommand("evaluate", "Evaluate a genome or baseline under the fitness function");
  add_algorithm_flags(eva, evaluate.algorithm);
  eva->add_option("--sizes", evaluate.sizes, "System sizes")->delimiter(',');
  eva->add_option("--trials", evaluate.trials, "Trials per size")->capture_default_str();
  eva->add_option("--seed", evaluate.seed, "Seed")->capture_default_str();
  eva->add_option("--key", evaluate.evaluation_key, "Evaluation key from an archive record");
  eva->add_option("--steps", evaluate.steps, "Steps per trial (default n^3)");
  eva->add_option("--colors", evaluate.colors, "Separation colour count")->capture_default_str();
  eva->add_option("--threads", evaluate.threads, "Worker threads (0 = all cores)");

  sops::ScaleRunOptions scale;
  auto* sr = app.add_subcommand("scale-run", "Run one trial at an arbitrary size with snapshots");
  add_algorithm_flags(sr, scale.algorithm);
  sr->add_option("--n", scale.n, "Particle count")->required();
  sr->add_option("--steps", scale.steps, "Step count (default n^3)");
  sr->add_option("--object", scale.object_file, "Coating object file of \"q r\" lines");
  sr->add_option("--snapshot-every", scale.snapshot_every, "Snapshot interval in steps");
  sr->add_option("--seed", scale.seed, "Seed")->capture_default_str();
  sr->add_option("--colors", scale.colors, "Separation colour count")->capture_default_str();
  sr->add_option("--out", scale.out, "Snapshot JSON-lines file (default stdout)");

  sops::AlgorithmChoice bins;
  auto* bn = app.add_subcommand("bins", "Aggregation move probabilities binned by neighbor count");
  add_algorithm_flags(bn, bins);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sops::kExitConfig;
  }

  if (*ev) return sops::cmd_evolve(evolve, std::cout, std::cerr);
  if (*eva) return sops::cmd_evaluate(evaluate, std::cout, std::cerr);
  if (*sr) return sops::cmd_scale_run(scale, std::cout, std::cerr);
  return sops::cmd_bins(bins, std::cout, std::cerr);
}
