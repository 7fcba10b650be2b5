#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "patternlab/scenario.hpp"

namespace patternlab {

/// Indices of the three pattern types inside every preset.
inline constexpr std::size_t kHeuristic = 0;       // Type 1: fast, generalizes well
inline constexpr std::size_t kOverfitting = 1;     // Type 2: medium speed, generalizes poorly
inline constexpr std::size_t kSlowGeneralizing = 2;  // Type 3: slow, generalizes well, preferred

/// Version tag of the preset constants; bump when any value changes.
inline constexpr std::string_view kPresetVersion = "presets-v1";

/// Weak heuristic, full-strength preferred slow pattern.
Scenario grokking_preset();

/// Strong-but-partial heuristic, partial slow pattern.
Scenario double_descent_preset();

/// Preset family indexed by lambda in [0,1]: gamma of the heuristic and
/// slow-generalizing patterns moves linearly from the double-descent values
/// (lambda = 0) to the grokking values (lambda = 1). Every other field is
/// shared by both presets. Throws ValidationError (field `lambda`).
Scenario interpolate(double lambda);

/// Names accepted by preset_by_name, in catalog order.
std::vector<std::string_view> preset_names();

/// `grokking` or `double-descent`.
std::optional<Scenario> preset_by_name(std::string_view name);

}  // namespace patternlab
