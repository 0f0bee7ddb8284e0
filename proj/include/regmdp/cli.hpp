#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "regmdp/config.hpp"

namespace regmdp::cli {

inline constexpr const char* kToolName = "regmdp";
inline constexpr const char* kVersion = "0.1.0";

/// 0 success, 1 property or verification failure, 2 config or input error,
/// 3 I/O failure.
enum ExitCode : int { kOk = 0, kCheckFailed = 1, kConfigError = 2, kIoError = 3 };

const std::vector<std::string>& subcommands();

/// Command-line values that take precedence over the config file. Applied
/// before the config is echoed, so the metadata alone replays the run.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> episodes;
  std::optional<std::size_t> trajectories;
};

/// Runs one subcommand, writing <out_dir>/<subcommand>.csv and
/// <out_dir>/<subcommand>.meta.json. Diagnostics go to `log`.
int run(const std::string& subcommand, ScenarioConfig config, const std::string& out_dir,
        const Overrides& overrides = {}, std::ostream* log = nullptr);

/// Full command-line entry point: parses argv, loads the config and calls run.
int main(int argc, char** argv);

}  // namespace regmdp::cli
