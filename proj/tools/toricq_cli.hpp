#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace toricq::cli {

// Exit codes: 0 success, 1 domain failure, 2 usage or input error.
enum ExitCode : int { kOk = 0, kDomainFailure = 1, kUsage = 2 };

// args excludes the program name. The report goes to `out` (or --out), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace toricq::cli
