#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace dpp {

using Vec = Eigen::Vector2d;   // points live in R^2; 1D problems use x only
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Thrown for malformed configuration: bad schema, unknown keys, inconsistent
// problem definitions. Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an optimizer reports a non-finite loss. Maps to CLI exit code 3.
struct DivergenceError : std::runtime_error {
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by the grid solvers: singular systems that need a pressure datum,
// or other discretization-level failures. Maps to CLI exit code 4.
struct OracleError : std::runtime_error {
  explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dpp
