#include "patternlab/domain_sim.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "parallel.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/model.hpp"
#include "random.hpp"

namespace patternlab {
namespace {

constexpr std::size_t kUncovered = static_cast<std::size_t>(-1);

struct TrialCounts {
  std::uint64_t train_hits = 0;
  std::uint64_t test_hits = 0;
  std::vector<std::uint64_t> allocated;  // per pattern
};

TrialCounts run_trial(const DomainSimConfig& config, std::span<const double> p,
                      std::uint64_t trial) {
  const auto patterns = config.scenario.patterns();
  const auto preferred = config.scenario.preferred();
  auto rng = detail::stream_rng(config.seed, trial);

  TrialCounts counts;
  counts.allocated.assign(p.size(), 0);
  std::vector<std::size_t> covered;
  covered.reserve(p.size());

  for (std::uint64_t point = 0; point < config.points; ++point) {
    covered.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (detail::uniform01(rng) < p[i]) covered.push_back(i);
    }

    std::size_t owner = kUncovered;
    if (!covered.empty()) {
      ++counts.train_hits;
      // A covered preferred pattern claims the point outright: its domain is
      // disjoint from every other domain on the test set.
      if (preferred && std::find(covered.begin(), covered.end(), *preferred) != covered.end()) {
        owner = *preferred;
      } else {
        owner = covered[detail::uniform_below(rng, covered.size())];
      }
      ++counts.allocated[owner];
    }

    const double success = owner == kUncovered ? config.scenario.baseline() : patterns[owner].g();
    if (detail::uniform01(rng) < success) ++counts.test_hits;
  }
  return counts;
}

std::vector<TrialCounts> run_all(const DomainSimConfig& config) {
  config.validate();
  std::vector<double> p;
  for (const Pattern& pattern : config.scenario.patterns()) {
    p.push_back(predictiveness(pattern, config.t));
  }
  std::vector<TrialCounts> trials(config.trials);
  detail::parallel_for(trials.size(), [&](std::size_t k) { trials[k] = run_trial(config, p, k); });
  return trials;
}

double bernoulli_stderr(double mean, double draws) {
  if (draws <= 1.0) return 0.0;
  const double variance = mean * (1.0 - mean) * draws / (draws - 1.0);
  return std::sqrt(std::max(0.0, variance) / draws);
}

}  // namespace

void DomainSimConfig::validate() const {
  if (!std::isfinite(t) || t < 0.0) throw ValidationError("t", "must be a finite value >= 0");
  if (points < 1) throw ValidationError("points", "must be at least 1");
  if (trials < 1) throw ValidationError("trials", "must be at least 1");
}

DomainSimResult simulate(const DomainSimConfig& config) {
  std::uint64_t train_hits = 0;
  std::uint64_t test_hits = 0;
  for (const TrialCounts& trial : run_all(config)) {
    train_hits += trial.train_hits;
    test_hits += trial.test_hits;
  }
  const double draws = static_cast<double>(config.points) * static_cast<double>(config.trials);
  DomainSimResult out;
  out.train_acc = static_cast<double>(train_hits) / draws;
  out.test_acc = static_cast<double>(test_hits) / draws;
  out.stderr_train = bernoulli_stderr(out.train_acc, draws);
  out.stderr_test = bernoulli_stderr(out.test_acc, draws);
  return out;
}

AllocationHistogram allocation_histogram(const DomainSimConfig& config) {
  std::vector<std::uint64_t> allocated(config.scenario.size(), 0);
  for (const TrialCounts& trial : run_all(config)) {
    for (std::size_t i = 0; i < allocated.size(); ++i) allocated[i] += trial.allocated[i];
  }
  const double draws = static_cast<double>(config.points) * static_cast<double>(config.trials);
  AllocationHistogram out;
  std::uint64_t covered = 0;
  for (std::uint64_t count : allocated) {
    out.frequencies.push_back(static_cast<double>(count) / draws);
    covered += count;
  }
  out.uncovered = static_cast<double>(config.points * config.trials - covered) / draws;
  return out;
}

}  // namespace patternlab
