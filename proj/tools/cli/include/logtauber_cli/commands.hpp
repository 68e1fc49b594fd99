#pragma once

#include <string>
#include <vector>

#include "logtauber_cli/config.hpp"
#include "logtauber_cli/output.hpp"

namespace logtauber::cli {

enum ExitCode : int {
  exit_ok = 0,
  exit_config_error = 1,
  exit_soft_quadrature_failure = 2,
  exit_identity_budget = 3,
};

/// Everything a command produced. Nothing is written until the command has
/// finished, so a failing command leaves no files behind.
struct CommandResult {
  int exit_code = exit_ok;
  std::vector<OutputFile> files;
  /// Diagnostics for standard error.
  std::vector<std::string> notes;
};

CommandResult cmd_means(const RunConfig& cfg);
CommandResult cmd_tauber(const RunConfig& cfg);
CommandResult cmd_identity(const RunConfig& cfg);
CommandResult cmd_counterexample(const RunConfig& cfg);
CommandResult cmd_catalog_list(const RunConfig& cfg);

}  // namespace logtauber::cli
