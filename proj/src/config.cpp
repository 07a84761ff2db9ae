#include "carnot/config.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "carnot/types.hpp"

namespace carnot {

std::uint64_t RunConfig::materialize_seed() {
  if (!seed) {
    std::random_device rd;
    std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    seed = drawn;
    std::cerr << "seed not given; drew seed=" << drawn << "\n";
  }
  return *seed;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  static const std::set<std::string> known = {"group",    "seed",     "tolerances",
                                              "out_path", "csv_path", "svg_path",
                                              "verbosity"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw ConfigError("config: unknown key '" + it.key() + "'");

  RunConfig cfg;
  if (j.contains("group")) cfg.group = j["group"].get<std::string>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out_path")) cfg.out_path = j["out_path"].get<std::string>();
  if (j.contains("csv_path")) cfg.csv_path = j["csv_path"].get<std::string>();
  if (j.contains("svg_path")) cfg.svg_path = j["svg_path"].get<std::string>();
  if (j.contains("verbosity")) cfg.verbosity = j["verbosity"].get<int>();
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("config: 'tolerances' must be an object");
    for (auto it = t.begin(); it != t.end(); ++it)
      cfg.tolerances[it.key()] = it.value().get<double>();
  }
  return cfg;
}

RunConfig default_config_from_env() {
  const char* path = std::getenv("POLARCG_CONFIG");
  if (path && *path) return load_config_file(path);
  return RunConfig{};
}

}  // namespace carnot
