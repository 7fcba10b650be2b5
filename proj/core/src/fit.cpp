#include "patternlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "csv.hpp"
#include "parallel.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/model.hpp"
#include "random.hpp"

namespace patternlab {
namespace {

constexpr std::size_t kParamsPerPattern = 4;  // gamma, alpha, b, g

void check_box(const ParamBox& box, const char* field, double upper_limit) {
  if (!std::isfinite(box.lo) || !std::isfinite(box.hi) || box.lo < 0.0 || box.hi > upper_limit ||
      box.lo > box.hi) {
    throw ValidationError(std::string("bounds.") + field,
                          "must satisfy 0 <= lo <= hi" +
                              std::string(upper_limit == 1.0 ? " <= 1" : "") + " with finite ends");
  }
}

/// Maps a unit coordinate onto a parameter box, either linearly or
/// geometrically between a positive floor and the upper bound.
struct Axis1D {
  double lo = 0.0;
  double hi = 1.0;
  bool geometric = false;
  double log_lo = 0.0;
  double log_hi = 0.0;

  static Axis1D linear(const ParamBox& box) { return {box.lo, box.hi, false, 0.0, 0.0}; }

  static Axis1D log_scaled(const ParamBox& box, double floor) {
    const double start = std::max(box.lo, floor);
    if (!(start > 0.0) || !(box.hi > start * 1.0000001)) return linear(box);
    return {start, box.hi, true, std::log(start), std::log(box.hi)};
  }

  double value(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    const double v = geometric ? std::exp(log_lo + u * (log_hi - log_lo)) : lo + u * (hi - lo);
    return std::clamp(v, lo, hi);
  }

  double coordinate(double v) const {
    if (hi <= lo) return 0.0;
    if (geometric) {
      return std::clamp((std::log(std::max(v, lo)) - log_lo) / (log_hi - log_lo), 0.0, 1.0);
    }
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
  }
};

struct Coding {
  Axis1D gamma, alpha, b, g;
  std::size_t n = 0;
  std::optional<std::size_t> preferred;
  double baseline = 0.0;

  std::size_t dims() const { return n * kParamsPerPattern; }

  Scenario decode(std::span<const double> u) const {
    std::vector<Pattern> patterns;
    patterns.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double* x = u.data() + k * kParamsPerPattern;
      patterns.emplace_back(gamma.value(x[0]), alpha.value(x[1]), b.value(x[2]), g.value(x[3]));
    }
    return Scenario(std::move(patterns), preferred, baseline);
  }
};

double smallest_spacing(std::span<const double> grid) {
  double h = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < grid.size(); ++i) h = std::min(h, grid[i] - grid[i - 1]);
  return h;
}

double smallest_positive(std::span<const double> grid) {
  for (double t : grid) {
    if (t > 0.0) return t;
  }
  return 1.0;
}

/// Time at fractional rank q in [0,1] of the grid, linearly interpolated.
double grid_quantile(std::span<const double> grid, double q) {
  const double pos = q * static_cast<double>(grid.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= grid.size()) return grid.back();
  const double frac = pos - static_cast<double>(i);
  return grid[i] + frac * (grid[i + 1] - grid[i]);
}

struct LocalResult {
  std::vector<double> u;
  double loss = std::numeric_limits<double>::infinity();
  std::size_t evals = 0;
  bool converged = false;
};

/// Nelder-Mead on the unit box with dimension-adaptive coefficients. Trial
/// points are projected onto the box. The simplex is rebuilt around the
/// best vertex each time it collapses, until a rebuild stops improving by
/// more than tol or the evaluation budget runs out.
template <class Objective>
LocalResult nelder_mead(Objective&& objective, std::vector<double> start, std::size_t max_evals,
                        double tol) {
  const std::size_t d = start.size();
  const double dd = static_cast<double>(d);
  const double reflect = 1.0;
  const double expand = 1.0 + 2.0 / dd;
  const double contract = 0.75 - 1.0 / (2.0 * dd);
  const double shrink = 1.0 - 1.0 / dd;

  LocalResult result;
  auto eval = [&](std::vector<double>& x) {
    for (double& v : x) v = std::clamp(v, 0.0, 1.0);
    ++result.evals;
    return objective(x);
  };

  std::vector<double> best = std::move(start);
  double best_loss = eval(best);
  double step = 0.1;

  while (result.evals < max_evals) {
    std::vector<std::vector<double>> simplex(d + 1, best);
    std::vector<double> f(d + 1);
    f[0] = best_loss;
    for (std::size_t j = 0; j < d; ++j) {
      auto& x = simplex[j + 1];
      x[j] += x[j] + step <= 1.0 ? step : -step;
      f[j + 1] = eval(x);
    }

    std::vector<std::size_t> order(d + 1);
    bool collapsed = false;
    while (result.evals < max_evals) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return f[a] < f[b]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[d - 1];
      if (f[hi] - f[lo] <= tol) {
        collapsed = true;
        break;
      }

      std::vector<double> centroid(d, 0.0);
      for (std::size_t v = 0; v <= d; ++v) {
        if (v == hi) continue;
        for (std::size_t j = 0; j < d; ++j) centroid[j] += simplex[v][j];
      }
      for (double& c : centroid) c /= dd;

      auto along = [&](double coef) {
        std::vector<double> x(d);
        for (std::size_t j = 0; j < d; ++j) x[j] = centroid[j] + coef * (simplex[hi][j] - centroid[j]);
        return x;
      };

      auto xr = along(-reflect);
      const double fr = eval(xr);
      if (fr < f[lo]) {
        auto xe = along(-reflect * expand);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[hi] = std::move(xe);
          f[hi] = fe;
        } else {
          simplex[hi] = std::move(xr);
          f[hi] = fr;
        }
      } else if (fr < f[second]) {
        simplex[hi] = std::move(xr);
        f[hi] = fr;
      } else {
        const bool outside = fr < f[hi];
        auto xc = along(outside ? -reflect * contract : contract);
        const double fc = eval(xc);
        if (fc < std::min(fr, f[hi])) {
          simplex[hi] = std::move(xc);
          f[hi] = fc;
        } else {
          for (std::size_t v = 0; v <= d; ++v) {
            if (v == lo) continue;
            for (std::size_t j = 0; j < d; ++j) {
              simplex[v][j] = simplex[lo][j] + shrink * (simplex[v][j] - simplex[lo][j]);
            }
            f[v] = eval(simplex[v]);
          }
        }
      }
    }

    const auto arg = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    const double improvement = best_loss - f[arg];
    if (f[arg] < best_loss) {
      best = simplex[arg];
      best_loss = f[arg];
    }
    if (collapsed && improvement <= tol) {
      result.converged = true;
      break;
    }
    step = std::max(step * 0.5, 1e-3);
  }

  result.u = std::move(best);
  result.loss = best_loss;
  return result;
}

Scenario sorted_by_inflection(const Scenario& scenario) {
  std::vector<std::size_t> order(scenario.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) {
    return scenario.pattern(a).b() < scenario.pattern(b).b();
  });
  std::vector<Pattern> patterns;
  std::optional<std::size_t> preferred;
  for (std::size_t k = 0; k < order.size(); ++k) {
    patterns.push_back(scenario.pattern(order[k]));
    if (scenario.preferred() == order[k]) preferred = k;
  }
  return Scenario(std::move(patterns), preferred, scenario.baseline());
}

}  // namespace

void ObservedCurve::validate() const {
  if (grid.empty()) throw ValidationError("observed", "observation is empty");
  if (grid.size() < 2) throw ValidationError("observed", "need at least 2 points");
  if (train.size() != grid.size() || test.size() != grid.size()) {
    throw ValidationError("observed", "t, train_acc and test_acc must have equal length");
  }
  if (!weights.empty() && weights.size() != grid.size()) {
    throw ValidationError("weights", "must match the number of observations");
  }
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0 || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw ValidationError("t", "must be finite, >= 0 and strictly increasing");
    }
    if (!(train[i] >= 0.0 && train[i] <= 1.0)) throw ValidationError("train_acc", "outside [0, 1]");
    if (!(test[i] >= 0.0 && test[i] <= 1.0)) throw ValidationError("test_acc", "outside [0, 1]");
    const double w = weight(i);
    if (!std::isfinite(w) || w < 0.0) throw ValidationError("weights", "must be finite and >= 0");
    weight_sum += w;
  }
  if (!(weight_sum > 0.0)) throw ValidationError("weights", "must not all be zero");
}

ObservedCurve observed_from_csv(std::string_view text) {
  static constexpr std::string_view kColumns[] = {"t", "train_acc", "test_acc"};
  ObservedCurve out;
  for (const auto& row : detail::read_numeric_csv(text, kColumns, 1)) {
    out.grid.push_back(row[0]);
    out.train.push_back(row[1]);
    out.test.push_back(row[2]);
    if (row.size() == 4) out.weights.push_back(row[3]);
  }
  out.validate();
  return out;
}

FitBounds FitBounds::from_grid(std::span<const double> grid) {
  FitBounds bounds;
  const double h = grid.size() > 1 ? smallest_spacing(grid) : 1.0;
  bounds.alpha = {0.0, 20.0 / h};
  bounds.b = {0.0, 2.0 * std::max(grid.empty() ? 1.0 : grid.back(), 1e-12)};
  return bounds;
}

void FitConfig::validate() const {
  if (n_patterns < 1 || n_patterns > 5) throw ValidationError("n_patterns", "must be in [1, 5]");
  if (preferred && *preferred >= n_patterns) {
    throw ValidationError("preferred", "must index one of the fitted patterns");
  }
  if (!std::isfinite(baseline) || baseline < 0.0 || baseline > 1.0) {
    throw ValidationError("baseline", "must be in [0, 1]");
  }
  if (restarts < 1) throw ValidationError("restarts", "must be at least 1");
  if (max_evals < 1) throw ValidationError("max_evals", "must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("tol", "must be > 0");
  if (bounds) {
    check_box(bounds->gamma, "gamma", 1.0);
    check_box(bounds->alpha, "alpha", std::numeric_limits<double>::max());
    check_box(bounds->b, "b", std::numeric_limits<double>::max());
    check_box(bounds->g, "g", 1.0);
  }
}

double fit_objective(const ObservedCurve& observed, const Scenario& scenario) {
  double sum = 0.0;
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < observed.grid.size(); ++i) {
    const double w = observed.weight(i);
    const double t = observed.grid[i];
    const double train_err = observed.train[i] - train_accuracy(scenario, t);
    const double test_err = observed.test[i] - test_accuracy_exact(scenario, t);
    sum += w * (train_err * train_err + test_err * test_err);
    weight_sum += w;
  }
  return sum / (2.0 * weight_sum);
}

FitResult fit(const ObservedCurve& observed, const FitConfig& config) {
  observed.validate();
  config.validate();
  const std::span<const double> grid = observed.grid;
  const FitBounds bounds = config.bounds.value_or(FitBounds::from_grid(grid));

  const double span = std::max(grid.back() - grid.front(), 1e-12);
  Coding coding;
  coding.gamma = Axis1D::linear(bounds.gamma);
  coding.g = Axis1D::linear(bounds.g);
  coding.alpha = Axis1D::log_scaled(bounds.alpha, 1e-2 / span);
  coding.b = Axis1D::log_scaled(bounds.b, 0.1 * smallest_positive(grid));
  coding.n = config.n_patterns;
  coding.preferred = config.preferred;
  coding.baseline = config.baseline;

  struct Candidate {
    std::optional<Scenario> scenario;
    double loss = std::numeric_limits<double>::infinity();
    std::size_t evals = 0;
    bool converged = false;
  };
  std::vector<Candidate> candidates(config.restarts);

  detail::parallel_for(config.restarts, [&](std::size_t r) {
    auto rng = detail::stream_rng(config.seed, r);
    std::vector<double> start(coding.dims());
    const double n = static_cast<double>(coding.n);
    for (std::size_t k = 0; k < coding.n; ++k) {
      double* x = start.data() + k * kParamsPerPattern;
      x[0] = detail::uniform01(rng);
      // Inflection points start at stratified grid quantiles so every
      // pattern's transition lands inside the observed window.
      const double b0 =
          grid_quantile(grid, (static_cast<double>(k) + detail::uniform01(rng)) / n);
      x[2] = coding.b.coordinate(b0);
      // Sharpness relative to the inflection point: alpha * b in [1, 50].
      const double sharpness = std::exp(std::log(50.0) * detail::uniform01(rng));
      x[1] = coding.alpha.coordinate(sharpness / std::max(coding.b.value(x[2]), 1e-12));
      x[3] = detail::uniform01(rng);
    }
    auto objective = [&](std::span<const double> u) {
      return fit_objective(observed, coding.decode(u));
    };
    LocalResult local = nelder_mead(objective, std::move(start), config.max_evals, config.tol);
    Candidate& c = candidates[r];
    c.scenario = sorted_by_inflection(coding.decode(local.u));
    c.loss = fit_objective(observed, *c.scenario);
    c.evals = local.evals;
    c.converged = local.converged;
  });

  std::size_t best = 0;
  std::size_t evals = 0;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    evals += candidates[r].evals;
    if (candidates[r].loss < candidates[best].loss) best = r;
  }
  return FitResult{*candidates[best].scenario, candidates[best].loss, evals,
                   candidates[best].converged};
}

}  // namespace patternlab
