#pragma once

#include <cstddef>
#include <cstdint>

#include "patternlab/scenario.hpp"

namespace patternlab {

/// Ranges for random_scenario draws.
struct RandomScenarioOptions {
  double max_alpha = 3.0;
  double max_b = 10.0;
  double preferred_probability = 0.5;
  bool random_baseline = true;  ///< otherwise 0
};

/// Scenario with `n` patterns: gamma, g uniform in [0,1], alpha in
/// [0, max_alpha], b in [0, max_b], a preferred pattern with the given
/// probability. Deterministic in (n, seed).
Scenario random_scenario(std::size_t n, std::uint64_t seed, const RandomScenarioOptions& options = {});

}  // namespace patternlab
