#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace quasilat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. `args` excludes the program name. Reports and CSV go to
// `out` unless an output path is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace quasilat::cli
