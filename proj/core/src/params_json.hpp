#pragma once

// Shared by the archive manifest and the runner's config file.

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "sops/evolution.hpp"

namespace sops::detail {

inline nlohmann::json params_json(const EvolutionParams& p) {
  nlohmann::json j;
  j["behavior"] = std::string(behavior_name(p.behavior));
  j["population"] = p.population;
  j["generations"] = p.generations;
  j["mutation_rate"] = p.mutation_rate;
  j["hypermutation"] = p.hypermutation ? nlohmann::json(*p.hypermutation) : nlohmann::json();
  j["diversity_low"] = p.diversity_low;
  j["diversity_high"] = p.diversity_high;
  j["sizes"] = p.sizes;
  j["trials"] = p.trials;
  j["seed"] = p.seed;
  j["colors"] = p.colors;
  return j;
}

inline bool is_params_key(const std::string& key) {
  static const char* const keys[] = {"behavior",      "population",     "generations",
                                     "mutation_rate", "hypermutation",  "diversity_low",
                                     "diversity_high", "sizes",         "trials",
                                     "seed",          "colors"};
  for (const char* k : keys) {
    if (key == k) return true;
  }
  return false;
}

/// Overrides fields of `p` present in `j`.  A "behavior" key, if present,
/// must already have been applied by the caller (it selects the defaults).
inline void merge_params(EvolutionParams& p, const nlohmann::json& j) {
  try {
    if (j.contains("population")) p.population = j.at("population").get<int>();
    if (j.contains("generations")) p.generations = j.at("generations").get<int>();
    if (j.contains("mutation_rate")) p.mutation_rate = j.at("mutation_rate").get<double>();
    if (j.contains("hypermutation")) {
      const auto& h = j.at("hypermutation");
      if (h.is_null()) {
        p.hypermutation.reset();
      } else {
        p.hypermutation = h.get<double>();
      }
    }
    if (j.contains("diversity_low")) p.diversity_low = j.at("diversity_low").get<double>();
    if (j.contains("diversity_high")) p.diversity_high = j.at("diversity_high").get<double>();
    if (j.contains("sizes")) p.sizes = j.at("sizes").get<std::vector<int>>();
    if (j.contains("trials")) p.trials = j.at("trials").get<int>();
    if (j.contains("seed")) p.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("colors")) p.colors = j.at("colors").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad parameter value: ") + e.what());
  }
}

inline Behavior behavior_from_json(const nlohmann::json& j) {
  if (!j.contains("behavior") || !j.at("behavior").is_string()) {
    throw std::invalid_argument("parameters need a \"behavior\" string");
  }
  const auto b = parse_behavior(j.at("behavior").get<std::string>());
  if (!b) throw std::invalid_argument("unknown behavior " + j.at("behavior").dump());
  return *b;
}

}  // namespace sops::detail
