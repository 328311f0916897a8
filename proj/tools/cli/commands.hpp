#pragma once

#include <filesystem>

#include "cli/config.hpp"

namespace acyl::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kStalled = 2,
  kPositivity = 3,
  kVerificationFailed = 4,
};

/// Output directory: ACYL_OUTPUT_DIR if set, else cfg.output_dir. An explicit
/// --out flag is applied to cfg before this is consulted, and wins.
std::filesystem::path output_dir(const RunConfig& cfg, bool flag_given);

/// Runs cfg.subcommand, writing manifest.json first and results after it.
/// Solver and verification outcomes map to exit codes; bad inputs throw.
int run(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace acyl::cli
