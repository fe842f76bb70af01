#pragma once

#include <stdexcept>
#include <string>

namespace pacsafe {

// Invalid user-supplied configuration: parameter ranges, config files,
// presets, unknown systems.  The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sampling could not produce a point: rejection cap exhausted, or a system
// produced a non-finite state.
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The LP solver failed numerically (singular basis, iteration cap, unbounded
// objective).  The CLI maps this to exit code 5.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// External plugin misbehaved: malformed reply, timeout, premature exit.
// The CLI maps this to exit code 4.
struct PluginError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace pacsafe
