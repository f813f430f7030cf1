// Run configuration: strict JSON schema with defaults, validation with
// path-qualified messages, and a deterministic run id.
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "pnlab/cell.hpp"

namespace pnlab::cli {

// Thrown for schema violations; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
  nlohmann::json effective;  // defaults filled in, echoed into the manifest
  std::string run_id;        // fnv-1a of the canonical effective config

  PeriodicPotential potential() const;
  Forcing forcing() const;
  LevyKernel1D kernel() const;

  // numerics block
  int nodes_per_period() const;
  double dt_factor() const;
  double horizon() const;
  double burn_in_fraction() const;
  double probe_dt() const;
  double tolerance() const;

  CellSpec base_cell_spec() const;
};

// Parses and validates; unknown keys and constraint violations raise
// ConfigError with the offending path.
RunConfig parse_config(const std::string& path);
RunConfig parse_config_json(const nlohmann::json& raw);

}  // namespace pnlab::cli
