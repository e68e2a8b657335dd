#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sumset {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerification = 1,
  kExitUsage = 2,
  kExitCapacity = 3,
};

/// Runs one command. `args` excludes the program name. Reports go to `out`
/// unless --out names a file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace sumset
