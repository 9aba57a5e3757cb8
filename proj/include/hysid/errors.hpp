#pragma once

#include <stdexcept>
#include <string>

namespace hysid {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration, file format, or argument values. CLI exit code 2.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Numerical failure: divergence, rank deficiency, singular systems. CLI exit code 3.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& msg) : Error(msg) {}
};

/// Model-structure violation of a structural assumption. CLI exit code 4.
class StructuralError : public Error {
 public:
  explicit StructuralError(const std::string& msg) : Error(msg) {}
};

}  // namespace hysid
