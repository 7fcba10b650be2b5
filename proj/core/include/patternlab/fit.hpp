#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "patternlab/scenario.hpp"

namespace patternlab {

struct ObservedCurve {
  std::vector<double> grid;
  std::vector<double> train;
  std::vector<double> test;
  std::vector<double> weights;  ///< empty means all ones

  /// Throws ValidationError: fewer than 2 points, mismatched lengths,
  /// non-increasing grid, accuracy outside [0,1] or negative weights.
  void validate() const;
  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }
};

/// Parses `t,train_acc,test_acc[,weight]` CSV (header required).
ObservedCurve observed_from_csv(std::string_view text);

struct ParamBox {
  double lo = 0.0;
  double hi = 1.0;
  friend bool operator==(const ParamBox&, const ParamBox&) = default;
};

struct FitBounds {
  ParamBox gamma{0.0, 1.0};
  ParamBox alpha{0.0, 1.0};
  ParamBox b{0.0, 1.0};
  ParamBox g{0.0, 1.0};

  /// alpha in [0, 20 / smallest grid spacing]; b in [0, 2 * last grid time].
  static FitBounds from_grid(std::span<const double> grid);
};

struct FitConfig {
  std::size_t n_patterns = 3;
  std::optional<std::size_t> preferred;
  double baseline = 0.0;
  std::size_t restarts = 16;
  std::size_t max_evals = 20'000;  ///< per restart
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::optional<FitBounds> bounds;  ///< derived from the grid when unset

  /// Throws ValidationError on malformed settings or ill-ordered bounds.
  void validate() const;
};

struct FitResult {
  Scenario scenario;  ///< patterns sorted by inflection point b
  double loss = 0.0;
  std::size_t evals = 0;
  bool converged = false;
};

/// Weighted mean squared error over the concatenated train and test series.
double fit_objective(const ObservedCurve& observed, const Scenario& scenario);

/// Multi-start bounded Nelder-Mead search over all pattern parameters.
/// Restart r depends only on (seed, r), so a run with more restarts never
/// reports a worse loss. Returned loss is fit_objective at the returned
/// scenario.
FitResult fit(const ObservedCurve& observed, const FitConfig& config);

}  // namespace patternlab
