#pragma once

#include <filesystem>
#include <string>

#include "sops/genome.hpp"

namespace sops {

/// {"behavior": "aggregation", "alleles": [...]}; extra keys are ignored on read.
std::string genome_to_json(const Genome& genome);
Genome genome_from_json(const std::string& text);

/// Throws std::runtime_error on I/O failure, std::invalid_argument on bad content.
Genome load_genome(const std::filesystem::path& path);
void save_genome(const Genome& genome, const std::filesystem::path& path);

/// Writes `text` to a sibling temporary file and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace sops
