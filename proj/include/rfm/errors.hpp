#pragma once

#include <stdexcept>
#include <string>

namespace rfm {

// Bad user input: malformed config files, unknown keys, out-of-range options.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical breakdown (failed factorization, non-finite intermediate).
// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rfm
