#include "patternlab/presets.hpp"

#include <cmath>
#include <string>

#include "patternlab/errors.hpp"

namespace patternlab {
namespace {

// Shared by both presets; only the heuristic and slow-generalizing gammas
// differ. Time units match the default grid log:0.1:1e4:200.
//
//                     alpha   b       g
// Type 1 heuristic    3.0     2       1.0
// Type 2 overfitting  0.5     20      0.02   (gamma = 1 in both presets)
// Type 3 slow         0.02    1000    1.0    (preferred)
constexpr double kHeuristicAlpha = 3.0;
constexpr double kHeuristicB = 2.0;
constexpr double kHeuristicG = 1.0;

constexpr double kOverfittingGamma = 1.0;
constexpr double kOverfittingAlpha = 0.5;
constexpr double kOverfittingB = 20.0;
constexpr double kOverfittingG = 0.02;

constexpr double kSlowAlpha = 0.02;
constexpr double kSlowB = 1000.0;
constexpr double kSlowG = 1.0;

// Chance level of mod-97 division.
constexpr double kBaseline = 1.0 / 97.0;

struct Gammas {
  double heuristic;
  double slow;
};

constexpr Gammas kGrokkingGammas{0.05, 1.0};
constexpr Gammas kDoubleDescentGammas{0.7, 0.85};

Scenario three_pattern(Gammas gammas) {
  return Scenario(
      {
          Pattern(gammas.heuristic, kHeuristicAlpha, kHeuristicB, kHeuristicG),
          Pattern(kOverfittingGamma, kOverfittingAlpha, kOverfittingB, kOverfittingG),
          Pattern(gammas.slow, kSlowAlpha, kSlowB, kSlowG),
      },
      kSlowGeneralizing, kBaseline);
}

double lerp(double from, double to, double lambda) {
  return (1.0 - lambda) * from + lambda * to;
}

}  // namespace

Scenario grokking_preset() { return three_pattern(kGrokkingGammas); }

Scenario double_descent_preset() { return three_pattern(kDoubleDescentGammas); }

Scenario interpolate(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0) {
    throw ValidationError("lambda", "must be in [0, 1] (got " + std::to_string(lambda) + ")");
  }
  return three_pattern({lerp(kDoubleDescentGammas.heuristic, kGrokkingGammas.heuristic, lambda),
                        lerp(kDoubleDescentGammas.slow, kGrokkingGammas.slow, lambda)});
}

std::vector<std::string_view> preset_names() { return {"grokking", "double-descent"}; }

std::optional<Scenario> preset_by_name(std::string_view name) {
  if (name == "grokking") return grokking_preset();
  if (name == "double-descent") return double_descent_preset();
  return std::nullopt;
}

}  // namespace patternlab
