#pragma once

#include "mcsim/scenario/config.hpp"
#include "mcsim/scenario/metrics.hpp"
#include "mcsim/scenario/simulation.hpp"

#include <string>
#include <vector>

namespace mcsim::scenario {

struct ExperimentResult
{
  std::vector<RunMetrics> runs;
  std::vector<RunStats> stats;
  std::vector<SummaryRow> summary;
};

/// Seed of run k.
inline std::uint64_t run_seed (const ScenarioConfig& config, int runIndex)
{
  return config.master_seed + static_cast<std::uint64_t> (runIndex);
}

/// Runs one replication; traces go to the given streams.
RunMetrics run_single (const ScenarioConfig& config, int runIndex, TraceSet traces = {}, RunStats* stats = nullptr);

/// Runs n_runs independent replications on up to `threads` worker threads
/// (0: hardware concurrency). With a non-empty outDir, run k writes
/// run-<k>-{mac,rlc,dc,channel}.csv (and run-<k>-ctrl.csv when enabled) there
/// and summary.csv is written at the end. Throws std::runtime_error if the
/// directory cannot be written.
ExperimentResult run_experiment (const ScenarioConfig& config, const std::string& outDir = "", unsigned threads = 0);

/// Descriptor rows (distance_m, r_cc) appended to summary.csv so plots can
/// pick their x axis without the config.
std::vector<SummaryRow> descriptor_rows (const ScenarioConfig& config);

} // namespace mcsim::scenario
