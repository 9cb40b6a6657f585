#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lofd::cli {

enum ExitCode : int { kSuccess = 0, kDomainFailure = 1, kUsage = 2 };

/// Runs one subcommand. `args` excludes the program name. Results go to
/// `out` (or the --out file), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lofd::cli
