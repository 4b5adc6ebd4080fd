#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace newton2pep {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUsage = 2, kExitInconclusive = 3 };

/// Runs `newton2pep <command> [flags]` in-process. `args` excludes the program
/// name. Reports go to `out` unless --report names a file; diagnostics go to
/// `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newton2pep
