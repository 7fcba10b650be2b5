#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace patternlab::detail {

/// Rows of a numeric CSV whose header starts with `required` and may carry
/// up to `optional_columns` more. Throws ValidationError (field `csv`).
std::vector<std::vector<double>> read_numeric_csv(std::string_view text,
                                                  std::span<const std::string_view> required,
                                                  std::size_t optional_columns);

}  // namespace patternlab::detail
