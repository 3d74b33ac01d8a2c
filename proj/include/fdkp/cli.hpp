#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdkp/config.hpp"

namespace fdkp {

struct CommandContext {
  Config config;
  std::filesystem::path out_dir = "out";
  int jobs = 1;
  std::ostream* report = nullptr;  // human-readable summary; null for silence
};

using FileList = std::vector<std::filesystem::path>;

FileList cmd_dispersion(const CommandContext& ctx);
FileList cmd_simulate(const CommandContext& ctx);
FileList cmd_soliton_check(const CommandContext& ctx);
FileList cmd_verify_integrals(const CommandContext& ctx);
FileList cmd_stability_eigen(const CommandContext& ctx);
FileList cmd_stability_perturb(const CommandContext& ctx);
FileList cmd_sweep(const CommandContext& ctx);

const std::vector<std::string>& subcommand_names();

/// Runs a subcommand and writes manifest.json into the output directory.
/// Errors propagate as fdkp::Error.
FileList run_command(const std::string& name, const CommandContext& ctx);

/// 0 on success, 2 for validation errors, 3 for numerical failures.
int exit_code_for(const std::exception& error);

/// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace fdkp
