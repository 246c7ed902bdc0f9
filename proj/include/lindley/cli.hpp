#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lindley::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 2,
    kDomain = 3,
    kIo = 4,
};

/// Runs the command-line front end. `args` excludes the program name.
/// Subcommands: posterior, bf, calibrate, sweep, simulate, regime.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lindley::cli
