#include "sops/archive.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <sstream>

#include "params_json.hpp"
#include "sops/genome_io.hpp"

#ifndef SOPS_VERSION
#define SOPS_VERSION "unknown"
#endif

namespace sops {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kStats = "stats.csv";
constexpr const char* kPopulation = "population.jsonl";
constexpr const char* kBest = "best_genome.json";
constexpr const char* kHall = "hall_of_fame.json";

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Complete (newline-terminated) lines only; a torn final write is dropped.
std::vector<std::string> complete_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    lines.push_back(text.substr(start, nl - start));
  }
  return lines;
}

void append_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void write_atomic(const fs::path& path, const std::string& text) {
  try {
    write_file_atomically(path, text);
  } catch (const std::runtime_error& e) {
    throw IoError(e.what());
  }
}

bool ranks_before(const ArchivedIndividual& a, const ArchivedIndividual& b) {
  if (a.fitness != b.fitness) return a.fitness > b.fitness;
  if (a.generation != b.generation) return a.generation < b.generation;
  return a.index < b.index;
}

json individual_json(Behavior behavior, const ArchivedIndividual& ind) {
  json j;
  j["behavior"] = std::string(behavior_name(behavior));
  j["alleles"] = std::vector<int>(ind.alleles.begin(), ind.alleles.end());
  j["fitness"] = ind.fitness;
  j["generation"] = ind.generation;
  j["index"] = ind.index;
  j["evaluation_key"] = ind.evaluation_key;
  return j;
}

bool same_params_except_generations(EvolutionParams a, EvolutionParams b) {
  a.generations = b.generations;
  return detail::params_json(a) == detail::params_json(b);
}

}  // namespace

std::string params_to_json(const EvolutionParams& params) {
  return detail::params_json(params).dump(2);
}

EvolutionParams params_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("parameters do not parse: ") + e.what());
  }
  EvolutionParams p = EvolutionParams::defaults(detail::behavior_from_json(j));
  detail::merge_params(p, j);
  return p;
}

std::string format_stats_row(const GenerationStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g", s.generation, s.best_fitness,
                s.mean_fitness, s.std_fitness, s.diversity, s.mutation_rate);
  return buf;
}

std::optional<GenerationStats> parse_stats_row(const std::string& line) {
  GenerationStats s;
  int consumed = 0;
  const int fields = std::sscanf(line.c_str(), "%d,%lf,%lf,%lf,%lf,%lf%n", &s.generation,
                                 &s.best_fitness, &s.mean_fitness, &s.std_fitness, &s.diversity,
                                 &s.mutation_rate, &consumed);
  if (fields != 6 || static_cast<std::size_t>(consumed) != line.size()) return std::nullopt;
  return s;
}

std::string individual_to_jsonl(const ArchivedIndividual& ind) {
  json j;
  j["generation"] = ind.generation;
  j["index"] = ind.index;
  j["fitness"] = ind.fitness;
  j["evaluation_key"] = ind.evaluation_key;
  j["alleles"] = std::vector<int>(ind.alleles.begin(), ind.alleles.end());
  return j.dump();
}

ArchivedIndividual individual_from_jsonl(const std::string& line) {
  try {
    const json j = json::parse(line);
    ArchivedIndividual ind;
    ind.generation = j.at("generation").get<int>();
    ind.index = j.at("index").get<std::size_t>();
    ind.fitness = j.at("fitness").get<double>();
    ind.evaluation_key = j.at("evaluation_key").get<std::uint64_t>();
    for (int a : j.at("alleles").get<std::vector<int>>()) {
      ind.alleles.push_back(static_cast<std::uint8_t>(Allele(a).value()));
    }
    return ind;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad population record: ") + e.what());
  }
}

std::vector<ArchivedIndividual> read_population_log(const fs::path& dir) {
  std::vector<ArchivedIndividual> out;
  for (const std::string& line : complete_lines(read_text(dir / kPopulation))) {
    if (!line.empty()) out.push_back(individual_from_jsonl(line));
  }
  return out;
}

// ---------------------------------------------------------------------------

RunArchive::RunArchive(fs::path dir, EvolutionParams params)
    : dir_(std::move(dir)), params_(std::move(params)) {}

bool RunArchive::exists(const fs::path& dir) {
  return fs::exists(dir / kManifest) || fs::exists(dir / kStats);
}

RunArchive RunArchive::create(const fs::path& dir, const EvolutionParams& params) {
  params.validate();
  if (exists(dir)) {
    throw std::invalid_argument(dir.string() + " already holds a run archive (use --resume)");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  RunArchive archive(dir, params);
  json manifest;
  manifest["version"] = SOPS_VERSION;
  manifest["seed"] = params.seed;
  manifest["config"] = detail::params_json(params);
  write_atomic(dir / kManifest, manifest.dump(2) + "\n");
  write_atomic(dir / kStats, std::string(kStatsHeader) + "\n");
  write_atomic(dir / kPopulation, "");
  return archive;
}

RunArchive RunArchive::resume(const fs::path& dir, const EvolutionParams& params) {
  params.validate();
  if (!exists(dir)) throw std::invalid_argument(dir.string() + " holds no run archive to resume");

  json manifest;
  try {
    manifest = json::parse(read_text(dir / kManifest));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("corrupt manifest: " + std::string(e.what()));
  }
  if (!manifest.contains("config")) throw std::invalid_argument("manifest has no config");
  const EvolutionParams stored = params_from_json(manifest.at("config").dump());
  if (!same_params_except_generations(stored, params)) {
    throw std::invalid_argument("parameters differ from the archived run");
  }

  RunArchive archive(dir, params);

  // Completed generations: consecutive stats rows from generation 0.
  const std::vector<std::string> rows = complete_lines(read_text(dir / kStats));
  if (rows.empty() || rows.front() != kStatsHeader) {
    throw std::invalid_argument("stats.csv lacks the expected header");
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto s = parse_stats_row(rows[i]);
    if (!s || s->generation != static_cast<int>(archive.stats_.size())) break;
    archive.stats_.push_back(*s);
  }
  int last = archive.last_generation();

  std::vector<ArchivedIndividual> kept;
  const std::size_t size = static_cast<std::size_t>(params.population);
  for (const std::string& line : complete_lines(read_text(dir / kPopulation))) {
    if (line.empty()) continue;
    ArchivedIndividual ind = individual_from_jsonl(line);
    if (ind.generation > last) break;
    kept.push_back(std::move(ind));
  }
  // Every completed generation must be fully present; otherwise fall back
  // to the last one that is.
  std::vector<std::size_t> counts(static_cast<std::size_t>(last + 1), 0);
  for (const auto& ind : kept) ++counts[static_cast<std::size_t>(ind.generation)];
  for (int g = 0; g <= last; ++g) {
    if (counts[static_cast<std::size_t>(g)] != size) {
      last = g - 1;
      break;
    }
  }
  archive.stats_.resize(static_cast<std::size_t>(last + 1));
  std::erase_if(kept, [&](const ArchivedIndividual& ind) { return ind.generation > last; });

  std::string stats_text = std::string(kStatsHeader) + "\n";
  for (const auto& s : archive.stats_) stats_text += format_stats_row(s) + "\n";
  std::string population_text;
  for (const auto& ind : kept) population_text += individual_to_jsonl(ind) + "\n";
  write_atomic(dir / kStats, stats_text);
  write_atomic(dir / kPopulation, population_text);

  for (const auto& ind : kept) {
    archive.offer(ind);
    if (ind.generation == last) archive.last_.push_back(ind);
  }
  std::sort(archive.last_.begin(), archive.last_.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });

  if (stored.generations != params.generations) {
    manifest["config"] = detail::params_json(params);
    write_atomic(dir / kManifest, manifest.dump(2) + "\n");
  }
  if (last >= 0) archive.write_derived();
  return archive;
}

std::vector<ArchivedIndividual> RunArchive::last_population() const { return last_; }

void RunArchive::offer(const ArchivedIndividual& ind) {
  const auto pos = std::upper_bound(hall_.begin(), hall_.end(), ind, ranks_before);
  if (static_cast<std::size_t>(pos - hall_.begin()) >= kHallOfFame) return;
  hall_.insert(pos, ind);
  if (hall_.size() > kHallOfFame) hall_.pop_back();
}

void RunArchive::append(const Population& population, const GenerationStats& stats) {
  if (stats.generation != last_generation() + 1) {
    throw std::invalid_argument("generations must be appended in order");
  }
  std::vector<ArchivedIndividual> members;
  members.reserve(population.members.size());
  std::string lines;
  for (std::size_t i = 0; i < population.members.size(); ++i) {
    const Individual& m = population.members[i];
    ArchivedIndividual ind{stats.generation, i, m.fitness, m.evaluation_key,
                           std::vector<std::uint8_t>(m.genome.alleles().begin(),
                                                     m.genome.alleles().end())};
    lines += individual_to_jsonl(ind) + "\n";
    members.push_back(std::move(ind));
  }
  append_text(dir_ / kPopulation, lines);
  append_text(dir_ / kStats, format_stats_row(stats) + "\n");

  stats_.push_back(stats);
  for (const auto& ind : members) offer(ind);
  last_ = std::move(members);
  write_derived();
}

void RunArchive::write_derived() const {
  json hall = json::array();
  for (const auto& ind : hall_) hall.push_back(individual_json(params_.behavior, ind));
  write_atomic(dir_ / kHall, hall.dump() + "\n");
  if (!hall_.empty()) {
    write_atomic(dir_ / kBest, individual_json(params_.behavior, hall_.front()).dump() + "\n");
  }
}

}  // namespace sops
