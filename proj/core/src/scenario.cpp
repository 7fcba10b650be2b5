#include "patternlab/scenario.hpp"

#include <cmath>
#include <string>

#include "patternlab/errors.hpp"

namespace patternlab {
namespace {

void require_unit(double value, const char* field) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    throw ValidationError(field, "must be a finite value in [0, 1] (got " + std::to_string(value) + ")");
  }
}

void require_nonnegative(double value, const char* field) {
  if (!std::isfinite(value) || value < 0.0) {
    throw ValidationError(field, "must be a finite value >= 0 (got " + std::to_string(value) + ")");
  }
}

}  // namespace

Pattern::Pattern(double gamma, double alpha, double b, double g)
    : gamma_(gamma), alpha_(alpha), b_(b), g_(g) {
  require_unit(gamma, "gamma");
  require_nonnegative(alpha, "alpha");
  require_nonnegative(b, "b");
  require_unit(g, "g");
}

Scenario::Scenario(std::vector<Pattern> patterns, std::optional<std::size_t> preferred,
                   double baseline)
    : patterns_(std::move(patterns)), preferred_(preferred), baseline_(baseline) {
  if (patterns_.empty()) throw ValidationError("patterns", "at least one pattern is required");
  if (preferred_ && *preferred_ >= patterns_.size()) {
    throw ValidationError("preferred", "index " + std::to_string(*preferred_) +
                                           " is out of range for " +
                                           std::to_string(patterns_.size()) + " patterns");
  }
  require_unit(baseline_, "baseline");
}

}  // namespace patternlab
