#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dpp {

struct RunOptions {
  std::string command;  // solve | invert | oracle | sweep | bench | export
  std::optional<std::string> preset;
  std::optional<std::string> config_path;
  std::vector<std::string> overrides;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> q_obs;  // invert: observed outlet flux
  std::vector<double> betas;    // sweep: coefficients to probe
};

// Executes one command and writes its artifacts under out_dir. Returns 0;
// failures surface as ConfigError / DivergenceError / OracleError, which the
// CLI maps to exit codes.
int run_command(const RunOptions& opt);

}  // namespace dpp
