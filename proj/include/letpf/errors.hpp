#pragma once

#include <stdexcept>
#include <string>

namespace letpf {

/// Invalid user configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The nonlinear solver or time integrator could not proceed (exit code 3).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace letpf
