#pragma once

#include <iosfwd>

namespace scatter1d {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_computation = 2, exit_validation = 3 };

/// Entry point of the scatter1d command line tool.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace scatter1d
