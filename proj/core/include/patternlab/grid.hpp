#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patternlab {

enum class GridScale { log, linear };

/// Time (or capacity) grid described as `log:start:end:count` or
/// `lin:start:end:count`.
struct GridSpec {
  GridScale scale = GridScale::log;
  double start = 0.1;
  double end = 1e4;
  std::size_t count = 200;

  /// Throws ValidationError (field `grid`) on malformed text or on a grid
  /// that cannot be strictly increasing.
  static GridSpec parse(std::string_view text);

  std::string to_string() const;

  /// Materialized grid; first and last values equal start and end exactly.
  std::vector<double> values() const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

inline constexpr std::string_view kDefaultGrid = "log:0.1:1e4:200";
inline constexpr std::size_t kMaxGridCount = 1'000'000;

}  // namespace patternlab
