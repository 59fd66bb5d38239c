#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bloomflow/config.hpp"
#include "bloomflow/dqn_eviction.hpp"
#include "bloomflow/metrics.hpp"
#include "bloomflow/sim.hpp"

namespace bloomflow {

/// Run the four locality experiments and write one CSV per experiment
/// into config.out_dir.
void cmd_lab(const AppConfig& config);

struct SimRun {
    RunSummary summary;
    SimStats stats;
    std::vector<SimEvent> events;              // when record_events was set
    std::vector<DecisionRecord> decisions;     // DQN policies only
};

/// One fully resolved (trace, policy, seed) cell.
SimRun run_sim_cell(const AppConfig& config, const Trace& trace,
                    const std::string& trace_id, bool record_events = false);

/// Load the configured trace (CSV path or the synthetic generator).
Trace resolve_trace(const AppConfig& config);
std::string trace_identifier(const AppConfig& config);

/// Run one cell end to end, writing summary.json, timeseries.csv and, for
/// DQN policies, decisions.csv under config.out_dir.
RunSummary cmd_sim(const AppConfig& config);

/// Cartesian sweep over the configured axes, bounded parallelism, with a
/// manifest marking completed cells; rerunning skips completed ones.
/// Returns the number of failed cells (0 means complete).
int cmd_sweep(const AppConfig& config);

/// Aggregate summary.json files under input_dir into comparison tables.
/// Missing or corrupt summaries are reported and skipped.
int cmd_report(const std::filesystem::path& input_dir,
               const std::filesystem::path& out_path);

}  // namespace bloomflow
