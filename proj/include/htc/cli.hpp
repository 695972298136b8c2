#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace htc::cli {

/// Environment variable naming the default output directory. When set and --output is
/// absent, reports go to <dir>/<subcommand>.<csv|json>; otherwise to `out`.
inline constexpr const char* kOutputDirEnv = "HTCHEEGER_OUTPUT_DIR";

/// Exit codes: 0 all pass, 2 any fail, 3 inconclusive without fail, 1 usage or domain error.
enum ExitCode : int { kPass = 0, kUsage = 1, kFail = 2, kInconclusive = 3 };

/// Runs one command line (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace htc::cli
