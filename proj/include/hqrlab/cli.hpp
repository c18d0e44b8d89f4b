#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hqrlab {

enum ExitCode { kExitOk = 0, kExitVerificationFailed = 1, kExitUsage = 2 };

/// Entry point of the `hqrlab` tool; argv[0] is the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hqrlab
