#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace widom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitVerdict = 3;

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json envelope;
  std::vector<std::filesystem::path> files;
};

/// Runs the configured task and writes <out_dir>/<prefix>.json (plus .csv for
/// series). Progress and verdict lines go to `log` unless quiet.
RunResult run(const ExperimentConfig& config, std::ostream& log, bool quiet = false);

struct TaskOutput {
  nlohmann::json result;
  std::string csv;  ///< series rows, empty for other tasks
  bool verdict_failed = false;
};

/// Task result without touching the filesystem. Throws ValidationError or SolverError.
TaskOutput run_task(const ExperimentConfig& config, std::ostream& log, bool quiet = false);

}  // namespace widom::cli
