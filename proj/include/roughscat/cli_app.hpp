#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace roughscat {

// Name of the environment variable holding the default output directory.
inline constexpr const char* kOutputEnvVar = "ROUGHSCAT_OUT";

struct RunOptions {
  std::string config_path;
  std::string out_dir;  // overrides the config and the environment
  int threads = 0;      // 0 keeps the OpenMP default
  bool dry_run = false;
  double tolerance_scale = 1.0;
};

// Exit codes: 0 all checks passed, 1 a tolerance was breached,
// 2 bad input or refused run (config error, inverse crime), 3 solver failure.
struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;
  std::string scene_hash;
};

const std::vector<std::string>& subcommands();

/// Runs one subcommand; progress and verdicts go to `log`.
RunResult run_command(const std::string& subcommand, const RunOptions& opts, std::ostream& log);

/// Command-line front end (CLI11).
int run_cli(int argc, char** argv);

}  // namespace roughscat
