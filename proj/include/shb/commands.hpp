#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shb/config.hpp"

namespace shb::io {

/// Exit codes shared by run_command and the CLI front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 2,
  exit_config = 3,
  exit_io = 4,
  exit_input = 5,
};

struct CommandArgs {
  std::string out_dir = ".";
  std::string format = "csv";  // csv | json-records
  std::optional<std::uint64_t> seed;
  std::optional<double> field_override;        // tesla (--B)
  std::optional<double> temperature_override;  // kelvin (--T, spin temperature)
  std::optional<double> burn_time_override;    // seconds (--burn-time)
  std::optional<std::string> input_path;       // fit commands
  std::optional<std::string> sweep_mode;       // fit-relaxation: field | temperature
  int bootstrap = 0;                           // 0 = covariance errors only
  std::string config_path;
  std::string config_text;  // raw file content, digested into the manifest
};

const std::vector<std::string>& command_names();

/// Dispatches one CLI command. Writes all outputs plus a run manifest under
/// args.out_dir and returns an ExitCode; unknown names print usage and
/// return exit_usage. Errors are reported on stderr, not thrown.
int run_command(const std::string& name, const CommandArgs& args, const ExperimentConfig& config);

}  // namespace shb::io
