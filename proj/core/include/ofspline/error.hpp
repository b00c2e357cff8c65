#pragma once

#include <stdexcept>
#include <string>

namespace ofspline {

/// Invalid input: a precondition of the called operation does not hold.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical kernel failed (non-SPD matrix, singular system, no convergence).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ofspline
