#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patternlab/model.hpp"
#include "patternlab/scenario.hpp"

namespace patternlab {

/// What the horizontal axis measures. The model is identical on both; the
/// label only records whether the grid is read as training time or capacity.
enum class Axis { time, capacity };

std::string_view to_string(Axis axis) noexcept;
/// Throws ValidationError (field `axis`).
Axis parse_axis(std::string_view text);

struct Curve {
  std::vector<double> grid;
  std::vector<double> train;
  std::vector<double> test;
  Axis axis = Axis::time;
  std::string source = "pattern-core";
  /// Monte Carlo samples per grid point when test accuracy was estimated;
  /// 0 means exact enumeration.
  std::uint64_t mc_samples = 0;

  std::size_t size() const noexcept { return grid.size(); }

  /// Throws ValidationError if lengths differ, the grid is not strictly
  /// increasing, or any accuracy is outside [0,1].
  void validate() const;
};

struct CurveOptions {
  /// Fall back to Monte Carlo when the scenario exceeds `cap`; otherwise
  /// CapExceededError propagates.
  bool mc_fallback = true;
  std::uint64_t mc_samples = 200'000;
  std::uint64_t seed = 0;
  std::size_t cap = kExactEnumerationCap;
};

/// Throws ValidationError (field `grid`) unless the grid is nonempty,
/// finite, nonnegative and strictly increasing.
void validate_grid(std::span<const double> grid);

/// Train and test accuracy evaluated pointwise over `grid`.
Curve curve(const Scenario& scenario, std::span<const double> grid, Axis axis = Axis::time,
            const CurveOptions& options = {});

}  // namespace patternlab
