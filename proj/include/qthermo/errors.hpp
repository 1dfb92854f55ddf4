#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qthermo {

/// Argument outside the mathematical domain of an operation (T <= 0, p outside [0,1], ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Inconsistent or malformed configuration. Carries every violation found, not just the first.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& message)
      : std::invalid_argument(message), violations_{message} {}
  explicit ConfigError(std::vector<std::string> violations)
      : std::invalid_argument(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (const auto& item : items) {
      if (!out.empty()) out += "; ";
      out += item;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

/// A request exceeds a hard size limit (enumeration rows, Fock truncation, branch count).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Inputs that make a ratio or bound undefined, e.g. a zero efficiency denominator.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace qthermo
