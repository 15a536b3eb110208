#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "generators.hpp"
#include "sops/archive.hpp"
#include "sops/genome_io.hpp"
#include "sops/runner.hpp"

using namespace sops;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("sops_io_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << text;
}

RunConfig small_run(const fs::path& out, int generations, unsigned threads = 1) {
  EvolveOptions o;
  o.behavior = "aggregation";
  o.population = 5;
  o.generations = generations;
  o.sizes = std::vector<int>{9};
  o.trials = 2;
  o.seed = 21;
  o.out = out;
  o.threads = threads;
  return resolve_run_config(o);
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(SOPS_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(GenomeIo, RoundTripsEveryBehavior) {
  Rng rng = make_rng({1});
  TempDir dir;
  for (Behavior b : kAllBehaviors) {
    const Genome g = testkit::random_genome(b, rng);
    EXPECT_EQ(genome_from_json(genome_to_json(g)), g);
    const fs::path file = dir / (std::string(behavior_short_name(b)) + ".json");
    save_genome(g, file);
    EXPECT_EQ(load_genome(file), g);
  }
}

TEST(GenomeIo, RejectsMalformedDocuments) {
  EXPECT_THROW(genome_from_json("{"), std::invalid_argument);
  EXPECT_THROW(genome_from_json(R"({"behavior":"aggregation"})"), std::invalid_argument);
  EXPECT_THROW(genome_from_json(R"({"behavior":"flocking","alleles":[]})"), std::invalid_argument);
  EXPECT_THROW(genome_from_json(R"({"behavior":"aggregation","alleles":[1,2]})"),
               std::invalid_argument);
  json j = json::parse(genome_to_json(Genome(Behavior::Aggregation)));
  j["alleles"][3] = 11;
  EXPECT_THROW(genome_from_json(j.dump()), std::invalid_argument);
  j["alleles"][3] = 2;
  j["fitness"] = 0.5;  // extra keys are tolerated
  EXPECT_EQ(genome_from_json(j.dump()).allele(3), 2);
  EXPECT_THROW(load_genome("/nonexistent/g.json"), std::runtime_error);
}

TEST(ArchiveFormat, StatsRowsRoundTripExactly) {
  const GenerationStats s{17, 0.1 + 0.2, 1.0 / 3.0, std::nextafter(0.5, 1.0), 0.0, 0.021};
  const auto back = parse_stats_row(format_stats_row(s));
  ASSERT_TRUE(back);
  EXPECT_EQ(back->generation, 17);
  EXPECT_EQ(back->best_fitness, s.best_fitness);
  EXPECT_EQ(back->mean_fitness, s.mean_fitness);
  EXPECT_EQ(back->std_fitness, s.std_fitness);
  EXPECT_EQ(back->diversity, s.diversity);
  EXPECT_EQ(back->mutation_rate, s.mutation_rate);
  EXPECT_FALSE(parse_stats_row("1,0.5,0.4"));
  EXPECT_FALSE(parse_stats_row("1,0.5,0.4,0.1,0.2,0.3,junk"));
  EXPECT_FALSE(parse_stats_row(kStatsHeader));
}

TEST(ArchiveFormat, PopulationLinesRoundTrip) {
  ArchivedIndividual ind{4, 9, 0.875, 0xfedcba9876543210ull, std::vector<std::uint8_t>(48, 7)};
  ind.alleles[0] = 10;
  const std::string line = individual_to_jsonl(ind);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const ArchivedIndividual back = individual_from_jsonl(line);
  EXPECT_EQ(back.generation, 4);
  EXPECT_EQ(back.index, 9u);
  EXPECT_EQ(back.fitness, 0.875);
  EXPECT_EQ(back.evaluation_key, ind.evaluation_key);
  EXPECT_EQ(back.alleles, ind.alleles);
  EXPECT_THROW(individual_from_jsonl(R"({"generation":1)"), std::invalid_argument);
}

TEST(ArchiveFormat, ParamsRoundTrip) {
  EvolutionParams p = EvolutionParams::defaults(Behavior::Separation);
  p.seed = 123456789012345ull;
  p.colors = 4;
  const EvolutionParams back = params_from_json(params_to_json(p));
  EXPECT_EQ(back.behavior, p.behavior);
  EXPECT_EQ(back.population, p.population);
  EXPECT_EQ(back.generations, p.generations);
  EXPECT_EQ(back.mutation_rate, p.mutation_rate);
  EXPECT_EQ(back.hypermutation, p.hypermutation);
  EXPECT_EQ(back.diversity_low, p.diversity_low);
  EXPECT_EQ(back.diversity_high, p.diversity_high);
  EXPECT_EQ(back.sizes, p.sizes);
  EXPECT_EQ(back.trials, p.trials);
  EXPECT_EQ(back.seed, p.seed);
  EXPECT_EQ(back.colors, p.colors);
}

TEST(RunConfig, LayersDefaultsConfigFileAndFlags) {
  TempDir dir;
  spit(dir / "cfg.json", R"({"behavior":"separation","population":6,"trials":2,"seed":5})");
  EvolveOptions o;
  o.config_file = dir / "cfg.json";
  o.population = 8;
  const RunConfig cfg = resolve_run_config(o);
  EXPECT_EQ(cfg.params.behavior, Behavior::Separation);
  EXPECT_EQ(cfg.params.population, 8);
  EXPECT_EQ(cfg.params.trials, 2);
  EXPECT_EQ(cfg.params.seed, 5u);
  EXPECT_EQ(cfg.params.generations, 300);
  EXPECT_EQ(cfg.params.hypermutation, 10.0);

  o.hypermutation = 0.0;
  EXPECT_FALSE(resolve_run_config(o).params.hypermutation);

  spit(dir / "bad.json", R"({"popsize":6})");
  o.config_file = dir / "bad.json";
  EXPECT_THROW(resolve_run_config(o), std::invalid_argument);
  o.config_file = dir / "missing.json";
  EXPECT_THROW(resolve_run_config(o), IoError);

  EvolveOptions bad;
  bad.behavior = "aggregation";
  bad.mutation_rate = 1.5;
  EXPECT_THROW(resolve_run_config(bad), std::invalid_argument);
  bad.mutation_rate.reset();
  bad.behavior = "nonsense";
  EXPECT_THROW(resolve_run_config(bad), std::invalid_argument);
}

TEST(RunArchive, WritesEveryFileAndHallOfFame) {
  TempDir dir;
  const RunConfig cfg = small_run(dir / "run", 3);
  const EvolutionSummary summary = run_evolution(cfg, false);
  ASSERT_EQ(summary.stats.size(), 4u);

  const fs::path run = dir / "run";
  for (const char* f :
       {"manifest.json", "stats.csv", "population.jsonl", "best_genome.json", "hall_of_fame.json"}) {
    EXPECT_TRUE(fs::exists(run / f)) << f;
  }
  const json manifest = json::parse(slurp(run / "manifest.json"));
  EXPECT_EQ(manifest["seed"], 21);
  EXPECT_EQ(manifest["config"]["population"], 5);

  std::istringstream stats(slurp(run / "stats.csv"));
  std::string line;
  std::getline(stats, line);
  EXPECT_EQ(line, kStatsHeader);
  int rows = 0;
  while (std::getline(stats, line)) {
    const auto row = parse_stats_row(line);
    ASSERT_TRUE(row);
    EXPECT_EQ(row->generation, rows);
    EXPECT_EQ(row->best_fitness, summary.stats[static_cast<std::size_t>(rows)].best_fitness);
    ++rows;
  }
  EXPECT_EQ(rows, 4);

  const auto log = read_population_log(run);
  ASSERT_EQ(log.size(), 20u);
  double best = -1.0;
  for (const auto& ind : log) best = std::max(best, ind.fitness);
  EXPECT_EQ(summary.best_fitness, best);

  const json hall = json::parse(slurp(run / "hall_of_fame.json"));
  ASSERT_EQ(hall.size(), RunArchive::kHallOfFame);
  for (std::size_t i = 1; i < hall.size(); ++i) {
    EXPECT_GE(hall[i - 1]["fitness"].get<double>(), hall[i]["fitness"].get<double>());
  }
  EXPECT_EQ(hall[0]["fitness"].get<double>(), best);
  const Genome top = load_genome(run / "best_genome.json");
  EXPECT_EQ(top, *summary.best_genome);
}

TEST(RunArchive, HallOfFameBestIsRunningMaximum) {
  TempDir dir;
  const RunConfig cfg = small_run(dir / "run", 4);
  run_evolution(cfg, false);
  const auto log = read_population_log(dir / "run");
  // Re-open after each prefix of generations and compare with the running max.
  double running = -1.0;
  for (int g = 0; g <= 4; ++g) {
    for (const auto& ind : log) {
      if (ind.generation == g) running = std::max(running, ind.fitness);
    }
    RunConfig prefix = small_run(dir / ("p" + std::to_string(g)), g);
    run_evolution(prefix, false);
    const RunArchive a = RunArchive::resume(prefix.out, prefix.params);
    EXPECT_EQ(a.hall_of_fame().front().fitness, running) << g;
  }
}

TEST(RunArchive, ResumeMatchesAnUninterruptedRun) {
  TempDir dir;
  run_evolution(small_run(dir / "fresh", 4, 2), false);
  run_evolution(small_run(dir / "split", 2, 1), false);
  run_evolution(small_run(dir / "split", 4, 3), true);
  for (const char* f : {"stats.csv", "population.jsonl", "best_genome.json", "hall_of_fame.json"}) {
    EXPECT_EQ(slurp(dir / "fresh" / f), slurp(dir / "split" / f)) << f;
  }
}

TEST(RunArchive, ResumeDiscardsTornGenerations) {
  TempDir dir;
  run_evolution(small_run(dir / "fresh", 3), false);
  run_evolution(small_run(dir / "torn", 3), false);
  const fs::path torn = dir / "torn";

  // Drop generation 3's stats row and cut its population lines mid-record.
  std::string stats = slurp(torn / "stats.csv");
  stats.erase(stats.rfind('\n', stats.size() - 2) + 1);
  spit(torn / "stats.csv", stats);
  std::string pop = slurp(torn / "population.jsonl");
  std::size_t cut = pop.size();
  for (int i = 0; i < 3; ++i) cut = pop.rfind('\n', cut - 2);
  spit(torn / "population.jsonl", pop.substr(0, cut + 20));

  const RunConfig cfg = small_run(torn, 3);
  {
    const RunArchive a = RunArchive::resume(torn, cfg.params);
    EXPECT_EQ(a.last_generation(), 2);
    EXPECT_EQ(a.last_population().size(), 5u);
  }
  run_evolution(cfg, true);
  for (const char* f : {"stats.csv", "population.jsonl", "best_genome.json", "hall_of_fame.json"}) {
    EXPECT_EQ(slurp(dir / "fresh" / f), slurp(torn / f)) << f;
  }
}

TEST(RunArchive, ResumeRejectsMismatchedParameters) {
  TempDir dir;
  run_evolution(small_run(dir / "run", 1), false);
  RunConfig other = small_run(dir / "run", 1);
  other.params.seed = 22;
  EXPECT_THROW(RunArchive::resume(other.out, other.params), std::invalid_argument);
  other = small_run(dir / "run", 1);
  other.params.mutation_rate = 0.03;
  EXPECT_THROW(run_evolution(other, true), std::invalid_argument);
  EXPECT_THROW(RunArchive::create(dir / "run", small_run(dir / "run", 1).params),
               std::invalid_argument);
}

TEST(Runner, EvolveExitCodes) {
  TempDir dir;
  std::ostringstream out, err;
  EvolveOptions o;
  o.behavior = "aggregation";
  o.population = 4;
  o.generations = 1;
  o.sizes = std::vector<int>{6};
  o.trials = 1;
  o.out = dir / "run";
  EXPECT_EQ(cmd_evolve(o, out, err), kExitOk);
  EXPECT_NE(out.str().find("best_fitness"), std::string::npos);
  EXPECT_EQ(cmd_evolve(o, out, err), kExitConfig);  // archive exists, no --resume
  o.resume = true;
  o.generations = 2;
  EXPECT_EQ(cmd_evolve(o, out, err), kExitOk);
  o.seed = 99;
  EXPECT_EQ(cmd_evolve(o, out, err), kExitConfig);

  EvolveOptions unwritable = o;
  unwritable.resume = false;
  unwritable.out = "/proc/sops-cannot-write-here";
  EXPECT_EQ(cmd_evolve(unwritable, out, err), kExitIo);
}

TEST(Runner, CliExitCodes) {
  TempDir dir;
  const fs::path log = dir / "log.txt";
  EXPECT_EQ(run_cli("--version", log), 0);
  EXPECT_EQ(run_cli("evolve --behavior nonsense", log), 2);
  EXPECT_EQ(run_cli("evolve --pop notanumber", log), 2);
  EXPECT_EQ(run_cli("evaluate --genome " + (dir / "missing.json").string(), log), 3);
  EXPECT_EQ(run_cli("evaluate --baseline li --genome x.json", log), 2);
  EXPECT_EQ(run_cli("evaluate --baseline threshold --sizes 5 --trials 1 --steps 10", log), 0);
  EXPECT_NE(slurp(log).find("# fitness"), std::string::npos);
  EXPECT_EQ(run_cli("bins --baseline li", log), 0);
  EXPECT_EQ(run_cli("evolve --behavior aggregation --pop 4 --gens 1 --sizes 5 --trials 1 --out " +
                        (dir / "cli").string(),
                    log),
            0);
  EXPECT_EQ(run_cli("evolve --behavior aggregation --pop 4 --gens 1 --sizes 5 --trials 1 --out " +
                        (dir / "cli").string(),
                    log),
            2);
}

TEST(Runner, ArchivedKeyReproducesArchivedFitness) {
  TempDir dir;
  const RunConfig cfg = small_run(dir / "run", 2);
  run_evolution(cfg, false);
  const auto log = read_population_log(dir / "run");
  for (std::size_t i = 0; i < log.size(); i += 4) {
    const Genome g(Behavior::Aggregation, log[i].alleles);
    const fs::path file = dir / "g.json";
    save_genome(g, file);
    EvaluateOptions e;
    e.algorithm.genome = file;
    e.sizes = cfg.params.sizes;
    e.trials = cfg.params.trials;
    e.evaluation_key = log[i].evaluation_key;
    e.threads = 2;
    EXPECT_EQ(run_evaluate(e).report.fitness, log[i].fitness);
  }
}

TEST(Runner, EvaluateReportsPerTrialScores) {
  EvaluateOptions e;
  e.algorithm.baseline = "li";
  e.sizes = std::vector<int>{7, 9};
  e.trials = 3;
  e.steps = 200;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_evaluate(e, out, err), kExitOk);
  std::istringstream lines(out.str());
  std::string line;
  int rows = 0;
  bool header = false;
  while (std::getline(lines, line)) {
    if (line == "n,trial,normalized") header = true;
    else if (!line.empty() && line[0] != '#') ++rows;
  }
  EXPECT_TRUE(header);
  EXPECT_EQ(rows, 6);
  const EvaluateResult r = run_evaluate(e);
  double mean = 0.0;
  for (const auto& t : r.report.trials) mean += t.normalized / 6.0;
  EXPECT_NEAR(r.mean_normalized, mean, 1e-12);
}

TEST(Runner, ScaleRunSnapshotFormat) {
  ScaleRunOptions o;
  o.algorithm.baseline = "threshold";
  o.n = 20;
  o.steps = 1000;
  o.snapshot_every = 400;
  std::ostringstream snaps;
  const ScaleRunResult r = run_scale(o, &snaps);
  EXPECT_EQ(r.steps, 1000u);
  std::istringstream lines(snaps.str());
  std::string line;
  std::vector<std::uint64_t> steps;
  while (std::getline(lines, line)) {
    const json j = json::parse(line);
    steps.push_back(j["step"]);
    ASSERT_EQ(j["nodes"].size(), 20u);
    for (const auto& node : j["nodes"]) ASSERT_EQ(node.size(), 3u);
    EXPECT_EQ(steps.size() == 1, j.contains("arena_side"));
    EXPECT_GE(j["normalized"].get<double>(), 0.0);
  }
  EXPECT_EQ(steps, (std::vector<std::uint64_t>{0, 400, 800, 1000}));
  EXPECT_EQ(r.trajectory.size(), 4u);
  EXPECT_EQ(r.trajectory.back().second, r.normalized);
}

TEST(Runner, ScaleRunWithObjectFile) {
  TempDir dir;
  spit(dir / "obj.txt", "# object\n0 0\n1 0\n1 1\n");
  Rng rng = make_rng({4});
  save_genome(testkit::random_genome(Behavior::Coating, rng), dir / "c.json");
  ScaleRunOptions o;
  o.algorithm.genome = dir / "c.json";
  o.n = 15;
  o.steps = 500;
  o.object_file = dir / "obj.txt";
  o.snapshot_every = 500;
  std::ostringstream snaps;
  run_scale(o, &snaps);
  const json first = json::parse(snaps.str().substr(0, snaps.str().find('\n')));
  EXPECT_EQ(first["object"].size(), 3u);

  ScaleRunOptions agg = o;
  agg.algorithm = AlgorithmChoice{};
  agg.algorithm.baseline = "li";
  EXPECT_THROW(run_scale(agg, &snaps), std::invalid_argument);
}

TEST(Runner, BinsCsv) {
  AlgorithmChoice c;
  c.baseline = "threshold";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_bins(c, out, err), kExitOk);
  std::istringstream lines(out.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "e,locus,probability");
  int rows = 0;
  while (std::getline(lines, line)) {
    int e = 0, locus = 0;
    double p = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%lf", &e, &locus, &p), 3) << line;
    EXPECT_EQ(p, e <= 2 ? 1.0 : 0.04);
    ++rows;
  }
  EXPECT_EQ(rows, 48);

  TempDir dir;
  save_genome(Genome(Behavior::Coating), dir / "c.json");
  c = AlgorithmChoice{};
  c.genome = dir / "c.json";
  EXPECT_EQ(cmd_bins(c, out, err), kExitConfig);
}

TEST(Fixtures, IrregularObjectSupportsLargeCoatingRuns) {
  const fs::path object = fs::path(SOPS_FIXTURE_DIR) / "irregular_object.txt";
  const auto nodes = load_object_file(object);
  EXPECT_EQ(nodes.size(), 61u);
  TempDir dir;
  save_genome(Genome(Behavior::Coating, 2), dir / "c.json");
  ScaleRunOptions o;
  o.algorithm.genome = dir / "c.json";
  o.n = 500;
  o.steps = 2000;
  o.object_file = object;
  const ScaleRunResult r = run_scale(o, nullptr);
  EXPECT_GT(r.normalized, 0.0);
  EXPECT_LE(r.normalized, 1.0 + 1e-9);
}

TEST(Fixtures, ExampleConfigsResolve) {
  for (const char* name : {"aggregation_desk.json", "separation.json"}) {
    EvolveOptions o;
    o.config_file = fs::path(SOPS_DATA_DIR) / name;
    EXPECT_NO_THROW(resolve_run_config(o)) << name;
  }
}
