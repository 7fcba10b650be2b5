#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "patternlab/domain_sim.hpp"
#include "patternlab/errors.hpp"
#include "patternlab/model.hpp"
#include "test_support.hpp"

namespace patternlab {
namespace {

Pattern certain(double g) { return Pattern(1.0, 1e6, 0.0, g); }

TEST(DomainSim, CertainCoverageAndCorrectness) {
  const DomainSimResult r = simulate({Scenario({certain(1.0)}), 1.0, 1000, 3, 5});
  EXPECT_EQ(r.train_acc, 1.0);
  EXPECT_EQ(r.test_acc, 1.0);
  EXPECT_EQ(r.stderr_test, 0.0);
}

TEST(DomainSim, EmptyCoverageFallsBackToBaseline) {
  const Scenario s({Pattern(0, 1, 1, 1), Pattern(0, 2, 3, 0.5)}, std::nullopt, 0.3);
  const DomainSimResult r = simulate({s, 4.0, 200'000, 1, 8});
  EXPECT_EQ(r.train_acc, 0.0);
  EXPECT_LE(std::abs(r.test_acc - 0.3), 3 * r.stderr_test);
}

TEST(DomainSim, Validation) {
  const Scenario s({certain(1.0)});
  EXPECT_THROW(simulate({s, 1.0, 0, 1, 0}), ValidationError);
  EXPECT_THROW(simulate({s, 1.0, 1, 0, 0}), ValidationError);
  EXPECT_THROW(simulate({s, -1.0, 1, 1, 0}), ValidationError);
}

TEST(DomainSim, DeterministicAndSeedSensitive) {
  std::mt19937_64 rng(31);
  const Scenario s = testing_support::draw_scenario(rng, 5);
  const DomainSimConfig config{s, 4.0, 20'000, 4, 77};
  const DomainSimResult a = simulate(config);
  const DomainSimResult b = simulate(config);
  EXPECT_EQ(a.train_acc, b.train_acc);
  EXPECT_EQ(a.test_acc, b.test_acc);
  EXPECT_EQ(a.stderr_test, b.stderr_test);
  DomainSimConfig other = config;
  other.seed = 78;
  EXPECT_NE(simulate(other).test_acc, a.test_acc);
}

TEST(DomainSim, ConvergesToClosedForm) {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 12; ++k) {
    const Scenario s = testing_support::draw_scenario(rng, 1 + k % 6);
    const double t = 0.5 + k;
    const DomainSimResult r = simulate({s, t, 100'000, 10, 900u + k});
    EXPECT_LE(std::abs(r.test_acc - test_accuracy_exact(s, t)), std::max(3 * r.stderr_test, 0.005)) << k;
    EXPECT_LE(std::abs(r.train_acc - train_accuracy(s, t)), std::max(3 * r.stderr_train, 0.005)) << k;
  }
}

TEST(AllocationHistogram, UniformOverTwoCoveringPatterns) {
  const DomainSimConfig config{Scenario({certain(0.2), certain(0.8)}), 1.0, 100'000, 2, 9};
  const AllocationHistogram h = allocation_histogram(config);
  ASSERT_EQ(h.frequencies.size(), 2u);
  const double sigma = std::sqrt(0.25 / 200'000.0);
  EXPECT_NEAR(h.frequencies[0], 0.5, 3 * sigma);
  EXPECT_NEAR(h.frequencies[1], 0.5, 3 * sigma);
  EXPECT_EQ(h.uncovered, 0.0);
}

TEST(AllocationHistogram, PreferredPatternClaimsEverything) {
  const DomainSimConfig config{Scenario({certain(0.2), certain(0.8)}, 0), 1.0, 50'000, 1, 9};
  const AllocationHistogram h = allocation_histogram(config);
  EXPECT_EQ(h.frequencies[0], 1.0);
  EXPECT_EQ(h.frequencies[1], 0.0);
}

TEST(AllocationHistogram, SinglePatternCoverage) {
  // alpha = 0 gives p = gamma / 2 = 0.3.
  const DomainSimConfig config{Scenario({Pattern(0.6, 0.0, 0.0, 1.0)}), 2.0, 200'000, 1, 10};
  const AllocationHistogram h = allocation_histogram(config);
  const double sigma = std::sqrt(0.3 * 0.7 / 200'000.0);
  EXPECT_NEAR(h.frequencies[0], 0.3, 3 * sigma);
  EXPECT_NEAR(h.uncovered, 0.7, 3 * sigma);
  EXPECT_DOUBLE_EQ(h.frequencies[0] + h.uncovered, 1.0);
}

TEST(AllocationHistogram, PreferredFrequencyEqualsItsCoverage) {
  // Pattern 1 is preferred with p = 0.4; others cover often.
  const Scenario s({Pattern(1.0, 0.0, 0.0, 0.1), Pattern(0.8, 0.0, 0.0, 0.9), Pattern(1.0, 1e6, 0.0, 0.5)}, 1);
  const AllocationHistogram h = allocation_histogram({s, 1.0, 200'000, 1, 11});
  const double sigma = std::sqrt(0.4 * 0.6 / 200'000.0);
  EXPECT_NEAR(h.frequencies[1], 0.4, 3 * sigma);
  double total = h.uncovered;
  for (double f : h.frequencies) total += f;
  EXPECT_NEAR(total, 1.0, 1e-12);
}

}  // namespace
}  // namespace patternlab
