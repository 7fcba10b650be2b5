#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace patternlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `patternlab` invocation; `args` excludes the program name.
/// Every run echoes the resolved seed to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace patternlab::cli
