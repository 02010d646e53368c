#ifndef DECOMPLAB_CLI_CLI_HPP
#define DECOMPLAB_CLI_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace decomplab {

/// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitInvalid = 2,
  kExitClassify = 3,
  kExitNotEquivalent = 4,
  kExitIo = 5,
};

inline constexpr const char *kVersion = "0.1.0";

/// Runs the command line `args` (without the program name). Machine output
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out,
            std::ostream &err);

} // namespace decomplab

#endif // DECOMPLAB_CLI_CLI_HPP
