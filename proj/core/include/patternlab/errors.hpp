#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace patternlab {

/// Raised when a value violates a domain invariant. `field()` names the
/// offending field using a JSON-style path such as `patterns[1].gamma`.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field.empty() ? message : field + ": " + message),
        field_(std::move(field)),
        message_(message) {}

  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return message_; }

  /// Same error with `prefix` prepended to the field path.
  ValidationError nested(const std::string& prefix) const {
    if (field_.empty()) return ValidationError(prefix, message_);
    const bool index = field_.front() == '[';
    return ValidationError(prefix + (index ? "" : ".") + field_, message_);
  }

 private:
  std::string field_;
  std::string message_;
};

/// Exact subset enumeration was requested for more patterns than the cap allows.
class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(std::size_t patterns, std::size_t cap)
      : std::runtime_error("exact enumeration supports at most " + std::to_string(cap) +
                           " patterns (got " + std::to_string(patterns) +
                           "); use the Monte Carlo estimator (test_accuracy_mc) instead"),
        patterns_(patterns),
        cap_(cap) {}

  std::size_t patterns() const noexcept { return patterns_; }
  std::size_t cap() const noexcept { return cap_; }

 private:
  std::size_t patterns_;
  std::size_t cap_;
};

}  // namespace patternlab
