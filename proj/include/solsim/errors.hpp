#pragma once

#include <stdexcept>
#include <string>

namespace solsim {

// Configuration / schema / range violations. Mapped to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical aborts (NaN detection, step-size guard). Mapped to exit code 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace solsim
