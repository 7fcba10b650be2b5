#include "patternlab/sampling.hpp"

#include "random.hpp"

namespace patternlab {

Scenario random_scenario(std::size_t n, std::uint64_t seed, const RandomScenarioOptions& options) {
  auto rng = detail::stream_rng(seed, n);
  std::vector<Pattern> patterns;
  patterns.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double gamma = detail::uniform01(rng);
    const double alpha = options.max_alpha * detail::uniform01(rng);
    const double b = options.max_b * detail::uniform01(rng);
    const double g = detail::uniform01(rng);
    patterns.emplace_back(gamma, alpha, b, g);
  }
  std::optional<std::size_t> preferred;
  if (n > 0 && detail::uniform01(rng) < options.preferred_probability) {
    preferred = detail::uniform_below(rng, n);
  }
  const double baseline = options.random_baseline ? detail::uniform01(rng) : 0.0;
  return Scenario(std::move(patterns), preferred, baseline);
}

}  // namespace patternlab
