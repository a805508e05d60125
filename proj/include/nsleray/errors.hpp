#pragma once

#include <stdexcept>
#include <string>

namespace nsleray {

/// Numerical failure of a solve: CFL violation, non-finite values, oracle
/// breakdown. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or missing configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nsleray
