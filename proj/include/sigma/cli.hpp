#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sigma/config.hpp"

namespace sigma::cli {

enum ExitCode : int { ok = 0, audit_failed = 1, invalid_input = 2, not_converged = 3 };

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct RunManifest {
  std::string command;
  ConfigMap config;
  std::map<std::string, std::string> versions;
  std::vector<StageTiming> timings;
  std::vector<std::string> outputs;  // file names relative to the output directory
  std::vector<std::string> notes;
  std::uint64_t rng_seed = 0;
  std::string status;
  bool pass = true;
  int exit_code = ExitCode::ok;
};

/// Each command writes its outputs and manifest.json into cfg.out_dir.
RunManifest cmd_simulate(const RunConfig& cfg);
RunManifest cmd_audit(const RunConfig& cfg);
RunManifest cmd_convergence(const RunConfig& cfg);
RunManifest cmd_feasibility_scan(const RunConfig& cfg);

/// Full entry point: parses argv (via CLI11), builds the config and dispatches.
/// Validation problems are printed to `err` and return ExitCode::invalid_input.
int run(int argc, const char* const* argv);

}  // namespace sigma::cli
