#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "nskf/baselines.hpp"
#include "nskf/nkf.hpp"

namespace nskf {

/// Solver settings read from a JSON file. Sections "nkf", "schedule", "cp",
/// "omp" and the top-level "rank_tol"; every key is optional, unknown keys
/// and wrongly typed values raise ConfigError.
struct SolverConfig {
  nkf::NkfConfig nkf;
  baselines::CpConfig cp;
  baselines::OmpConfig omp;

  void validate() const;
};

SolverConfig parse_config(const nlohmann::json& j);
SolverConfig load_config(const std::string& path);
nlohmann::json to_json(const SolverConfig& c);

}  // namespace nskf
