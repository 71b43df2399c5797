#ifndef BSNET_TOOLS_CLI_HPP_
#define BSNET_TOOLS_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace bsnet::cli {

inline constexpr const char *kToolVersion = "0.1.0";

enum ExitCode : int {
    kOk = 0,
    kUsageError = 1,     // bad flags, unreadable or malformed input
    kUnresolvable = 2,   // trial budget cannot resolve the TDR target
    kNoFeasibleDesign = 3,
};

/// Runs the command line `args` (without the program name), writing results
/// to `out` (or the --out file) and diagnostics to `err`.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace bsnet::cli

#endif // BSNET_TOOLS_CLI_HPP_
