#include "patternlab/shape.hpp"

#include <algorithm>
#include <vector>

namespace patternlab {

std::optional<GrokkingWitness> find_grokking(const Curve& curve, double baseline,
                                             const GrokkingCriteria& criteria) {
  const std::size_t n = curve.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (curve.train[i] < criteria.train_min || curve.test[i] > baseline + criteria.test_margin) {
      continue;
    }
    const double earliest = curve.grid[i] * criteria.ratio;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (curve.grid[j] >= earliest && curve.test[j] >= criteria.test_min) {
        return GrokkingWitness{i, j};
      }
    }
  }
  return std::nullopt;
}

std::optional<DoubleDescentWitness> find_double_descent(const Curve& curve, double min_dip) {
  const std::size_t n = curve.size();
  if (n < 3) return std::nullopt;
  const auto& test = curve.test;

  // suffix_min[k] = index of the smallest test value in [k, n).
  std::vector<std::size_t> suffix_min(n);
  suffix_min[n - 1] = n - 1;
  for (std::size_t k = n - 1; k-- > 0;) {
    suffix_min[k] = test[k] <= test[suffix_min[k + 1]] ? k : suffix_min[k + 1];
  }

  const double final_value = test.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const bool local_max = test[i] > test[i - 1] && test[i] >= test[i + 1];
    if (!local_max || final_value <= test[i]) continue;
    const std::size_t trough = suffix_min[i + 1];
    if (test[trough] <= test[i] - min_dip) {
      return DoubleDescentWitness{i, trough, test[i], test[trough], final_value};
    }
  }
  return std::nullopt;
}

}  // namespace patternlab
