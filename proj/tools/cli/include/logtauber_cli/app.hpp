#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace logtauber::cli {

/// Parses the command line, runs one subcommand and writes its output.
/// Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logtauber::cli
