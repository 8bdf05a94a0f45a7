#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "config.hpp"

namespace bubbles::app {

enum ExitCode : int { kSuccess = 0, kValidationFailure = 1, kNonConvergence = 2, kBadInput = 3 };

struct CommandOptions {
  std::optional<std::filesystem::path> out_dir;
  bool quiet = false;
  /// Overrides the T-map factor (1 - U); used to show that validate catches it.
  std::optional<double> t_lambda;
};

int run_solve(const RunConfig& config, const CommandOptions& options, std::ostream& log);
int run_bench(const BenchConfig& config, const CommandOptions& options, std::ostream& log);
int run_validate(const CommandOptions& options, std::ostream& log);

}  // namespace bubbles::app
