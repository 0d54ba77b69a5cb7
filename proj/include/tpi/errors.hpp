#pragma once

#include <stdexcept>
#include <string>

namespace tpi {

/// Invalid run configuration or violated model invariant (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(message), field_(std::move(field)) {}
  explicit ConfigError(const std::string& message) : ConfigError("", message) {}

  /// Dotted path of the offending config field, empty when not tied to one.
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Argument outside the domain of a physical formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Integrator or other numerical failure (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tpi
