#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "run_config.hpp"

namespace tpp::cli {

struct RunOptions {
  int seeds = 1;
  int threads = 1;
  std::optional<std::string> out_dir;  // per-run CSV files go here
  std::optional<std::string> sweep;    // analyze only: key=lo:hi:step
};

/// Runs one subcommand, writing the summary (or the analyze table) to `out`.
/// Library and config errors propagate as tpp::Error.
void run_command(Command command, const RunConfig& config, const RunOptions& options,
                 std::ostream& out);

/// Linear-interpolated quantile of unsorted values; +inf entries sort last.
double quantile(std::vector<double> values, double q);

}  // namespace tpp::cli
