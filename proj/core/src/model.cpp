#include "patternlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "patternlab/errors.hpp"
#include "random.hpp"

namespace patternlab {
namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw ValidationError("t", "must be a finite value >= 0 (got " + std::to_string(t) + ")");
  }
}

std::vector<double> all_predictiveness(const Scenario& scenario, double t) {
  std::vector<double> p;
  p.reserve(scenario.size());
  for (const Pattern& pattern : scenario.patterns()) p.push_back(predictiveness(pattern, t));
  return p;
}

struct SubsetWalk {
  const std::vector<double>& p;
  std::span<const Pattern> patterns;
  std::optional<std::size_t> preferred;
  double baseline;
  double accuracy = 0.0;
  double mass = 0.0;
  std::size_t subsets = 0;

  void visit(std::size_t i, double prob, std::size_t count, double g_sum, bool has_preferred) {
    if (i == p.size()) {
      double generalization = baseline;
      if (has_preferred) {
        generalization = patterns[*preferred].g();
      } else if (count > 0) {
        generalization = g_sum / static_cast<double>(count);
      }
      accuracy += prob * generalization;
      mass += prob;
      ++subsets;
      return;
    }
    visit(i + 1, prob * (1.0 - p[i]), count, g_sum, has_preferred);
    visit(i + 1, prob * p[i], count + 1, g_sum + patterns[i].g(),
          has_preferred || preferred == i);
  }
};

}  // namespace

double predictiveness(const Pattern& pattern, double t) {
  require_time(t);
  const double exponent =
      std::clamp(-pattern.alpha() * (t - pattern.b()), -kExponentClamp, kExponentClamp);
  return pattern.gamma() / (1.0 + std::exp(exponent));
}

double train_accuracy(const Scenario& scenario, double t) {
  double miss = 1.0;
  for (const Pattern& pattern : scenario.patterns()) miss *= 1.0 - predictiveness(pattern, t);
  return std::clamp(1.0 - miss, 0.0, 1.0);
}

SubsetEnumeration enumerate_subsets(const Scenario& scenario, double t, std::size_t cap) {
  if (scenario.size() > cap) throw CapExceededError(scenario.size(), cap);
  const std::vector<double> p = all_predictiveness(scenario, t);
  SubsetWalk walk{p, scenario.patterns(), scenario.preferred(), scenario.baseline()};
  walk.visit(0, 1.0, 0, 0.0, false);
  if (std::abs(walk.mass - 1.0) > 1e-9) {
    throw std::logic_error("subset probabilities sum to " + std::to_string(walk.mass));
  }
  return {walk.accuracy, walk.mass, walk.subsets};
}

double test_accuracy_exact(const Scenario& scenario, double t, std::size_t cap) {
  return std::clamp(enumerate_subsets(scenario, t, cap).test_accuracy, 0.0, 1.0);
}

McEstimate test_accuracy_mc(const Scenario& scenario, double t, std::uint64_t samples,
                            std::uint64_t seed) {
  if (samples == 0) throw ValidationError("samples", "must be at least 1");
  const std::vector<double> p = all_predictiveness(scenario, t);
  const auto patterns = scenario.patterns();
  const auto preferred = scenario.preferred();
  auto rng = detail::stream_rng(seed, 0);

  // Welford running mean and variance of G(A).
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::size_t count = 0;
    double g_sum = 0.0;
    bool has_preferred = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (detail::uniform01(rng) < p[i]) {
        ++count;
        g_sum += patterns[i].g();
        has_preferred = has_preferred || preferred == i;
      }
    }
    double value = scenario.baseline();
    if (has_preferred) {
      value = patterns[*preferred].g();
    } else if (count > 0) {
      value = g_sum / static_cast<double>(count);
    }
    const double delta = value - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (value - mean);
  }
  McEstimate out;
  out.estimate = std::clamp(mean, 0.0, 1.0);
  if (samples > 1) {
    const double variance = std::max(0.0, m2 / static_cast<double>(samples - 1));
    out.std_error = std::sqrt(variance / static_cast<double>(samples));
  }
  return out;
}

}  // namespace patternlab
