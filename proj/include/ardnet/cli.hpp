#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ardnet::cli {

/// Exit statuses of the command line front end.
enum ExitCode : int {
    kSuccess = 0,
    kUsageError = 1,
    kDataError = 2,
    kNumericalError = 3,
};

/// Runs `ardnet <subcommand> ...`. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ardnet::cli
