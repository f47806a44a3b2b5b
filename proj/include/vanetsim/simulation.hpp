#pragma once

#include <optional>
#include <string>

#include "vanetsim/metrics.hpp"
#include "vanetsim/scenario.hpp"

namespace vanet {

struct RunOutputs {
  std::string trace_path;     // empty: no trace file
  std::string schedule_path;  // empty: no motion schedule file
  // Keep only agent-level and drop records in memory (sweeps); the trace
  // file, when requested, always receives every record.
  bool agt_and_drops_only = false;
};

struct RunResult {
  MetricsReport metrics;  // agent-endpoint metrics for the scenario's traffic
  // Literal trace-script semantics; absent when the in-memory trace was
  // trimmed, because the script reads router-level records too.
  std::optional<MetricsReport> script_metrics;
  std::size_t trace_records = 0;
  std::size_t events = 0;
};

// Builds and runs one full scenario: motion precomputed from the seed (so
// both protocols see identical trajectories), per-node routing agents,
// traffic endpoints, shared medium.  Identical configs with identical seeds
// produce byte-identical traces.  A run whose traffic layer never emits a
// packet raises NoTrafficError.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOutputs& out = {});

// The motion schedule text a run with this config would export.
std::string motion_schedule_text(const ScenarioConfig& cfg);

}  // namespace vanet
