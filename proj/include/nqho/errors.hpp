#pragma once

#include <stdexcept>
#include <string>

namespace nqho {

/// Invalid configuration (bad grid, parameters, flags). Maps to CLI exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure at run time (NaN/Inf mid-integration). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nqho
