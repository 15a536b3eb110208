#include "sops/genome_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sops {

using nlohmann::json;

std::string genome_to_json(const Genome& genome) {
  json j;
  j["behavior"] = std::string(behavior_name(genome.behavior()));
  j["alleles"] = std::vector<int>(genome.alleles().begin(), genome.alleles().end());
  return j.dump();
}

Genome genome_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("genome JSON does not parse: ") + e.what());
  }
  if (!j.is_object() || !j.contains("behavior") || !j.contains("alleles")) {
    throw std::invalid_argument("genome JSON needs \"behavior\" and \"alleles\"");
  }
  const auto behavior = parse_behavior(j["behavior"].get<std::string>());
  if (!behavior) throw std::invalid_argument("unknown behavior in genome JSON");
  std::vector<std::uint8_t> alleles;
  for (const auto& a : j["alleles"]) {
    if (!a.is_number_integer()) throw std::invalid_argument("alleles must be integers");
    alleles.push_back(static_cast<std::uint8_t>(Allele(a.get<int>()).value()));
  }
  return Genome(*behavior, std::move(alleles));
}

Genome load_genome(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open genome file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return genome_from_json(buf.str());
}

void write_file_atomically(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
}

void save_genome(const Genome& genome, const std::filesystem::path& path) {
  write_file_atomically(path, genome_to_json(genome) + "\n");
}

}  // namespace sops
