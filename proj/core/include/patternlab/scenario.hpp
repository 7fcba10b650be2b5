#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace patternlab {

/// One learnable mechanism: a sigmoid predictiveness trajectory plus the
/// fraction of its generalization set it classifies correctly at test time.
class Pattern {
 public:
  /// Throws ValidationError (field `gamma`, `alpha`, `b` or `g`) on values
  /// outside gamma,g in [0,1]; alpha,b >= 0; or non-finite input.
  Pattern(double gamma, double alpha, double b, double g);

  double gamma() const noexcept { return gamma_; }
  double alpha() const noexcept { return alpha_; }
  double b() const noexcept { return b_; }
  double g() const noexcept { return g_; }

  Pattern with_gamma(double gamma) const { return Pattern(gamma, alpha_, b_, g_); }

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  double gamma_;
  double alpha_;
  double b_;
  double g_;
};

/// Ordered pattern set with an optional preferred pattern and the accuracy
/// assigned when no pattern succeeds (the empty-subset generalization).
class Scenario {
 public:
  explicit Scenario(std::vector<Pattern> patterns,
                    std::optional<std::size_t> preferred = std::nullopt,
                    double baseline = 0.0);

  std::span<const Pattern> patterns() const noexcept { return patterns_; }
  const Pattern& pattern(std::size_t i) const { return patterns_.at(i); }
  std::size_t size() const noexcept { return patterns_.size(); }
  std::optional<std::size_t> preferred() const noexcept { return preferred_; }
  double baseline() const noexcept { return baseline_; }

  friend bool operator==(const Scenario&, const Scenario&) = default;

 private:
  std::vector<Pattern> patterns_;
  std::optional<std::size_t> preferred_;
  double baseline_;
};

}  // namespace patternlab
