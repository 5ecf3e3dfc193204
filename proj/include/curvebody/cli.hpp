#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace curvebody::cli {

enum ExitCode : int {
  kSuccess = 0,
  kInadmissible = 1,
  kUsage = 2,
  kSingularity = 3,
};

struct CommandOptions {
  std::filesystem::path out_dir;  // empty: config "output_dir" or the working directory
  bool force = false;
  bool strict_b = false;
  bool project = false;
};

int cmd_check(const std::filesystem::path& config, const CommandOptions& options,
              std::ostream& out, std::ostream& err);
int cmd_simulate_reduced(const std::filesystem::path& config, const CommandOptions& options,
                         std::ostream& out, std::ostream& err);
int cmd_simulate_full(const std::filesystem::path& config, const CommandOptions& options,
                      std::ostream& out, std::ostream& err);
int cmd_cross_validate(const std::filesystem::path& config, const CommandOptions& options,
                       std::ostream& out, std::ostream& err);
int cmd_scan(const std::filesystem::path& config, const CommandOptions& options,
             std::ostream& out, std::ostream& err);

/// Dispatch by subcommand name; returns kUsage for unknown names.
int run_command(const std::string& name, const std::filesystem::path& config,
                const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace curvebody::cli
