#pragma once

#include <stdexcept>
#include <string>

namespace csvortex {

/// Invalid user input: bad configuration, inadmissible parameters, malformed points.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Input that is well formed but outside what the construction supports.
struct UnsupportedConfiguration : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid too coarse, evaluation at a singular point, or similar misuse.
struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iteration did not converge; `last_residual` is the last value seen.
struct ConvergenceError : std::runtime_error {
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual(last_residual) {}
  double last_residual;
};

/// A linear system was singular or failed its residual check.
struct LinearSolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace csvortex
