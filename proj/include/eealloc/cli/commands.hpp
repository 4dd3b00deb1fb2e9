#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eealloc::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kInputError = 1,  ///< bad flags, unreadable or invalid scenario, or a
                    ///< failed verification check
  kInfeasible = 2,
  kOracleRefused = 3,
};

/**
 * Runs one CLI invocation. `args` excludes the program name.
 *
 * Subcommands: solve-fixed, solve-joint, sweep, verify, gen.
 */
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

int run(const std::vector<std::string>& args);

}  // namespace eealloc::cli
