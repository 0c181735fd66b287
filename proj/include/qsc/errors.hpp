#pragma once

#include <stdexcept>
#include <string>

namespace qsc {

/// Operand lies outside the supported algebra fragment (e.g. two different
/// Weyl exponential axes in one product).
class UnsupportedFragment : public std::domain_error {
 public:
  explicit UnsupportedFragment(const std::string& what) : std::domain_error(what) {}
};

/// Invalid numerical parameters (step sizes, truncation dimensions, ...).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine detected that its own result cannot be trusted.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace qsc
