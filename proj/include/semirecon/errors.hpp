#pragma once

#include <stdexcept>
#include <string>

namespace semirecon {

// Bad configuration values (grid too small, unknown method, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inputs that violate a precondition (inadmissible data, mismatched grids).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Solver blow-up or other numerical breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semirecon
