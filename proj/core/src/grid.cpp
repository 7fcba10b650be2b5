#include "patternlab/grid.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "patternlab/errors.hpp"

namespace patternlab {
namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ValidationError("grid", "invalid number '" + std::string(text) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() != 4) {
    throw ValidationError("grid", "expected log:start:end:count or lin:start:end:count, got '" +
                                      std::string(text) + "'");
  }
  GridSpec spec;
  if (parts[0] == "log") {
    spec.scale = GridScale::log;
  } else if (parts[0] == "lin") {
    spec.scale = GridScale::linear;
  } else {
    throw ValidationError("grid", "unknown grid scale '" + std::string(parts[0]) + "'");
  }
  spec.start = parse_real(parts[1]);
  spec.end = parse_real(parts[2]);
  std::size_t count = 0;
  const auto [ptr, ec] =
      std::from_chars(parts[3].data(), parts[3].data() + parts[3].size(), count);
  if (ec != std::errc{} || ptr != parts[3].data() + parts[3].size()) {
    throw ValidationError("grid", "invalid count '" + std::string(parts[3]) + "'");
  }
  spec.count = count;

  if (spec.count < 1 || spec.count > kMaxGridCount) {
    throw ValidationError("grid", "count must be in [1, " + std::to_string(kMaxGridCount) + "]");
  }
  if (spec.start < 0.0) throw ValidationError("grid", "start must be >= 0");
  if (spec.scale == GridScale::log && spec.start <= 0.0) {
    throw ValidationError("grid", "log grids need start > 0");
  }
  if (spec.count > 1 && !(spec.end > spec.start)) {
    throw ValidationError("grid", "end must exceed start");
  }
  return spec;
}

std::string GridSpec::to_string() const {
  return std::string(scale == GridScale::log ? "log" : "lin") + ":" + format_real(start) + ":" +
         format_real(end) + ":" + std::to_string(count);
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double steps = static_cast<double>(count - 1);
  if (scale == GridScale::log) {
    const double lo = std::log(start);
    const double hi = std::log(end);
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = std::exp(lo + (hi - lo) * (static_cast<double>(i) / steps));
    }
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      out[i] = start + (end - start) * (static_cast<double>(i) / steps);
    }
  }
  out.front() = start;
  out.back() = end;
  for (std::size_t i = 1; i < count; ++i) {
    if (!(out[i] > out[i - 1])) {
      throw ValidationError("grid", "grid points are not strictly increasing at this resolution");
    }
  }
  return out;
}

}  // namespace patternlab
