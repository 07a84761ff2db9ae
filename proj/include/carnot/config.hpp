#pragma once

// Run configuration: group selector, seed, tolerance overrides, output paths.
// Loadable from a JSON file (--config or the POLARCG_CONFIG environment
// variable); unknown keys are rejected. A missing seed is drawn once and
// logged, never silently defaulted.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace carnot {

struct RunConfig {
  std::string group = "heis1";  // builtin name or spec-file path
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
  std::string out_path;   // report destination ("" = stdout)
  std::string csv_path;
  std::string svg_path;
  int verbosity = 1;

  /// Returns the seed, drawing (and logging to stderr) one if unset.
  std::uint64_t materialize_seed();
};

RunConfig load_config_file(const std::string& path);

/// Merge file config (if POLARCG_CONFIG or --config given) under CLI values.
RunConfig default_config_from_env();

}  // namespace carnot
