#include "patternlab/curve.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"
#include "random.hpp"
#include "patternlab/errors.hpp"

namespace patternlab {

std::string_view to_string(Axis axis) noexcept {
  return axis == Axis::time ? "time" : "capacity";
}

Axis parse_axis(std::string_view text) {
  if (text == "time") return Axis::time;
  if (text == "capacity") return Axis::capacity;
  throw ValidationError("axis", "expected 'time' or 'capacity', got '" + std::string(text) + "'");
}

void validate_grid(std::span<const double> grid) {
  if (grid.empty()) throw ValidationError("grid", "must contain at least one point");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw ValidationError("grid", "point " + std::to_string(i) + " must be finite and >= 0");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ValidationError("grid", "must be strictly increasing (index " + std::to_string(i) + ")");
    }
  }
}

void Curve::validate() const {
  validate_grid(grid);
  if (train.size() != grid.size() || test.size() != grid.size()) {
    throw ValidationError("curve", "grid, train and test must have equal length");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (double v : {train[i], test[i]}) {
      if (!(v >= 0.0 && v <= 1.0)) {
        throw ValidationError("curve", "accuracy at index " + std::to_string(i) + " is outside [0, 1]");
      }
    }
  }
}

namespace {

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  return detail::splitmix64(seed ^ detail::splitmix64(index));
}

}  // namespace

Curve curve(const Scenario& scenario, std::span<const double> grid, Axis axis,
            const CurveOptions& options) {
  validate_grid(grid);
  const bool use_mc = scenario.size() > options.cap;
  if (use_mc && !options.mc_fallback) throw CapExceededError(scenario.size(), options.cap);

  Curve out;
  out.grid.assign(grid.begin(), grid.end());
  out.train.resize(grid.size());
  out.test.resize(grid.size());
  out.axis = axis;
  out.mc_samples = use_mc ? options.mc_samples : 0;

  detail::parallel_for(grid.size(), [&](std::size_t i) {
    const double t = grid[i];
    out.train[i] = train_accuracy(scenario, t);
    out.test[i] = use_mc ? test_accuracy_mc(scenario, t, options.mc_samples, point_seed(options.seed, i)).estimate
                         : test_accuracy_exact(scenario, t, options.cap);
  });
  return out;
}

}  // namespace patternlab
