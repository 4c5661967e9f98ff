#pragma once

#include <string>
#include <vector>

#include "tamed/config.hpp"

namespace tamed {
namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitExperiment = 4;

/// Verbosity comes from the TAMEDSDE_VERBOSE environment variable
/// (0 = warnings only, 1 = progress, 2 = detail).
int verbosity_from_env();

/// Writes `samples` trajectory CSVs plus a run manifest under output_dir.
int cmd_simulate(const RunConfig& config, const std::string& output_dir, int verbosity);

/// Runs the coupled experiment; writes rates.csv, summary.json and the
/// manifest. Exit 0 regardless of the fitted rate.
int cmd_converge(const RunConfig& config, const std::string& output_dir, int workers,
                 int verbosity);

/// Runs the selected assumption checks; writes checks.json. Exit 0 iff all
/// selected checks passed.
int cmd_check(const RunConfig& config, const std::string& output_dir, int verbosity);

/// Full command-line entry point (subcommands simulate | converge | check).
int run(int argc, const char* const* argv);

}  // namespace cli
}  // namespace tamed
