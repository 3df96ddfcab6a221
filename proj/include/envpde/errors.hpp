// Error taxonomy shared across the library.
#pragma once

#include <stdexcept>
#include <string>

namespace envpde {

// Bad user-facing configuration (CLI config file, out-of-range parameters).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Filesystem trouble while reading or writing artifacts.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A stochastic simulation exceeded its step cap or left the admissible state.
struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace envpde
