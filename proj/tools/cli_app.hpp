#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qcdense::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFailed = 1;
inline constexpr int kUsage = 2;
inline constexpr int kInternal = 3;

/// Runs the command line (without the program name). JSON goes to `out`
/// unless --out is given; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qcdense::cli
