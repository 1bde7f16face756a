#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "spintorsion/app/run_config.hpp"

namespace spintorsion::app {

struct CommandResult {
  int exit_code = 0;
  std::filesystem::path directory;    // output_dir / command
  std::vector<std::string> files;     // written, relative to directory
  std::string summary;                // one line for the terminal
};

/// Each command writes into output_dir/<name>/ its results plus config.json
/// (resolved configuration) and versions.json.
CommandResult cmd_levels(const RunConfig& cfg);
CommandResult cmd_coupling_map(const RunConfig& cfg);
CommandResult cmd_lmg_phase(const RunConfig& cfg);
CommandResult cmd_cat(const RunConfig& cfg);
CommandResult cmd_fringes(const RunConfig& cfg);
/// Exit code 1 when any oracle check fails.
CommandResult cmd_validate(const RunConfig& cfg);

const std::vector<std::string>& command_names();
CommandResult run_command(const std::string& name, const RunConfig& cfg);

/// Fixed CSV number format: 12 significant digits, '.' decimal point.
std::string format_number(double value);

}  // namespace spintorsion::app
