#ifndef TORIC_CONFIG_HPP
#define TORIC_CONFIG_HPP

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "toric/checks.hpp"
#include "toric/variation.hpp"

namespace toric {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : ConfigError {
  using ConfigError::ConfigError;
};
struct SchemaError : ConfigError {
  using ConfigError::ConfigError;
};
struct MissingBlock : ConfigError {
  using ConfigError::ConfigError;
};

/// Fully validated run description: geometry, potential, weight, solver
/// knobs and the command-specific blocks, with defaults resolved.
struct RunConfig {
  std::string command;
  PotentialSpec spec;
  Eigen::VectorXi k;
  SolveOptions solver;

  std::vector<Direction> directions;  // resolved dictionary
  FlowOptions flow;
  HullOptions hull;
  std::uint64_t checks_seed = 0;
  int checks_symbol_draws = 100;

  std::string out_dir = "out";
  bool dump_eigenfunction = false;
  bool dump_q_field = false;
  int dump_grid = 33;

  nlohmann::json echo;  // config with resolved defaults, round-trippable
};

/// Parses and validates a JSON config for the given command. Physics knobs
/// (potential.beta, solver.degree, solver.cluster_tol) have no defaults and
/// must be explicit; unknown keys are rejected by name.
RunConfig load_config(const std::string& path, const std::string& command);

/// In-memory variant, used by the round-trip tests.
RunConfig parse_config(const nlohmann::json& j, const std::string& command);

}  // namespace toric

#endif
