#pragma once

#include <stdexcept>
#include <string>

namespace qnl {

// Thrown for invalid arguments to math-level operations (bad moment
// interval, negative weight abscissa, out-of-domain evaluation).
struct argument_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown for invalid problem setup (interface off grid, region too
// narrow for the horizon, malformed config file).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when a linear system is numerically singular.
struct singular_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qnl
