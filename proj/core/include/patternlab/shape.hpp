#pragma once

#include <cstddef>
#include <optional>

#include "patternlab/curve.hpp"

namespace patternlab {

/// Grid indices witnessing delayed generalization.
struct GrokkingWitness {
  std::size_t fit_index;          ///< train >= train_min, test <= baseline + test_margin
  std::size_t generalize_index;   ///< test >= test_min, at least `ratio` times later
};

struct GrokkingCriteria {
  double train_min = 0.99;
  double test_margin = 0.1;
  double test_min = 0.95;
  double ratio = 5.0;
};

/// Earliest pair (t1, t2) with t1 < t2 and t2/t1 >= ratio satisfying the
/// criteria, if any.
std::optional<GrokkingWitness> find_grokking(const Curve& curve, double baseline,
                                             const GrokkingCriteria& criteria = {});

/// Rise, dip, rise in the test series.
struct DoubleDescentWitness {
  std::size_t peak_index;    ///< local maximum m1
  std::size_t trough_index;  ///< later minimum, at least `min_dip` below m1
  double peak;
  double trough;
  double final_value;        ///< last test value, > peak
};

std::optional<DoubleDescentWitness> find_double_descent(const Curve& curve,
                                                        double min_dip = 0.05);

}  // namespace patternlab
