#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "richlab/config.hpp"

namespace richlab {

/// Build identifier (git describe at configure time).
std::string build_id();

struct RunOptions {
  unsigned threads = 1;        // speed only; results are identical for any value
  std::string command_line;    // recorded in the manifest
};

struct RunReport {
  int exit_code = 0;            // 0 ok, 3 horizon hit(s); errors are thrown
  std::int64_t horizon_hits = 0;
  std::string message;          // one-line human summary
  std::vector<std::filesystem::path> files;
};

/// Runs the experiment and writes into cfg.out:
///   results.csv   table for the kind (docs/output-formats.md)
///   reps.csv      per-replication values, where the kind has them
///   summary.json  parameters, estimates, intervals, seeds, truncation settings, build id
///   manifest.json full config text, build id, calibration version, threads, timestamp
/// A file `.partial` exists in cfg.out while the run is in progress and stays behind if it
/// fails or is interrupted. Every file except manifest.json is a deterministic function of
/// the config. Throws Error (ConfigError for an unwritable output directory).
RunReport run_experiment(const ExperimentConfig& cfg, const RunOptions& opts = {});

}  // namespace richlab
