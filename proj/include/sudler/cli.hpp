#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sudler {

inline constexpr const char* kSchemaVersion = "1";

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitUsage = 2,
    kExitBudget = 3,
    kExitInconclusive = 4,
};

// Runs the command line (args excludes the program name) and returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sudler
