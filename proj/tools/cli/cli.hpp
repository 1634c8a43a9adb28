#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causeplan::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;     // invalid model, goal not reached, expectation unmet
inline constexpr int kExitInputError = 2;   // usage, syntax, missing file, unknown id, condition mismatch
inline constexpr int kExitStateCap = 3;     // state space exceeds --max-states
inline constexpr int kExitNoConvergence = 4;

/// Runs one subcommand. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causeplan::cli
