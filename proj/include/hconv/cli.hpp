#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hconv {

enum ExitCode : int {
  kExitPass = 0,
  kExitFactFailure = 1,
  kExitUsage = 2,
  kExitWindow = 3,  // WindowTooSmall or NoCertificate
};

/// Runs one command; `args` excludes the program name. JSON goes to `out`
/// (or the --out file), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hconv
