#pragma once

#include <cstddef>
#include <cstdint>

#include "patternlab/scenario.hpp"

namespace patternlab {

/// Largest pattern count evaluated by exhaustive subset enumeration
/// (2^20 subsets). Larger scenarios go through test_accuracy_mc.
inline constexpr std::size_t kExactEnumerationCap = 20;

/// The sigmoid exponent is clamped to +-kExponentClamp before exp().
inline constexpr double kExponentClamp = 700.0;

/// p(t) = gamma / (1 + exp(-alpha (t - b))). Throws ValidationError (field
/// `t`) for negative or non-finite t.
double predictiveness(const Pattern& pattern, double t);

/// Probability that at least one pattern classifies a training point:
/// 1 - prod_i (1 - p_i(t)).
double train_accuracy(const Scenario& scenario, double t);

/// Result of walking every subset A of the pattern set.
struct SubsetEnumeration {
  double test_accuracy = 0.0;  ///< sum_A P_A(t) G(A)
  double mass = 0.0;           ///< sum_A P_A(t); 1 up to rounding
  std::size_t subsets = 0;
};

/// Exhaustive walk over all 2^n subsets. Throws CapExceededError when
/// n > cap.
SubsetEnumeration enumerate_subsets(const Scenario& scenario, double t,
                                    std::size_t cap = kExactEnumerationCap);

/// Expected test accuracy sum_A P_A(t) G(A), where G(A) is g_k when the
/// preferred pattern k is in A, the mean g over A otherwise, and the
/// scenario baseline for the empty set.
double test_accuracy_exact(const Scenario& scenario, double t,
                           std::size_t cap = kExactEnumerationCap);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;  ///< sample standard deviation / sqrt(samples)
};

/// Unbiased Monte Carlo estimate of test_accuracy_exact. Each sample draws
/// every pattern's success independently with probability p_i(t) and
/// records G(A). Deterministic for a fixed seed. Throws ValidationError
/// when samples == 0.
McEstimate test_accuracy_mc(const Scenario& scenario, double t, std::uint64_t samples,
                            std::uint64_t seed);

}  // namespace patternlab
