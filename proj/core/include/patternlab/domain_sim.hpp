#pragma once

#include <cstdint>
#include <vector>

#include "patternlab/scenario.hpp"

namespace patternlab {

/// Monte Carlo simulation of the domain formalism: each pattern owns a
/// random domain that contains a point with probability p_i(t); a test
/// point is allocated to the preferred pattern when covered by it, otherwise
/// uniformly to one of the covering patterns.
struct DomainSimConfig {
  Scenario scenario;
  double t = 0.0;
  std::uint64_t points = 1;  ///< synthetic test-set size per trial
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;

  /// Throws ValidationError (fields `t`, `points`, `trials`).
  void validate() const;
};

struct DomainSimResult {
  double train_acc = 0.0;
  double test_acc = 0.0;
  double stderr_train = 0.0;
  double stderr_test = 0.0;
};

DomainSimResult simulate(const DomainSimConfig& config);

struct AllocationHistogram {
  std::vector<double> frequencies;  ///< one entry per pattern
  double uncovered = 0.0;           ///< 1 - sum(frequencies)
};

AllocationHistogram allocation_histogram(const DomainSimConfig& config);

}  // namespace patternlab
