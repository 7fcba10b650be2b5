#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "patternlab/curve.hpp"
#include "patternlab/scenario.hpp"

namespace patternlab {

// Scenario text format:
//   {"patterns": [{"gamma": .., "alpha": .., "b": .., "g": ..}, ...],
//    "preferred": <index or null>, "baseline": <real>}
// `preferred` and `baseline` are optional on input (null and 0).

/// Throws ValidationError with a field path on malformed input.
Scenario scenario_from_json(std::string_view text);
std::string scenario_to_json(const Scenario& scenario, int indent = 2);

/// CSV with header `t,train_acc,test_acc`, values printed with 17
/// significant digits so they read back bit-identical.
std::string curve_to_csv(const Curve& curve);
Curve curve_from_csv(std::string_view text, Axis axis = Axis::time);

/// JSON object with fields t, train_acc, test_acc, axis, source, mc_samples.
std::string curve_to_json(const Curve& curve, int indent = -1);
Curve curve_from_json(std::string_view text);

/// Sidecar for a CSV curve: axis label, source, Monte Carlo settings and the
/// resolved scenario that produced it.
std::string curve_metadata_json(const Curve& curve, const Scenario& scenario,
                                std::uint64_t seed);

/// Writes to a temporary sibling and renames over `path`, so readers never
/// see a partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Throws std::runtime_error if the file cannot be read.
std::string read_file(const std::filesystem::path& path);

}  // namespace patternlab
