#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vanetsim/classify.hpp"
#include "vanetsim/scenario.hpp"

namespace vanet {

enum class SweepAxis { Pause, Speed, Both };

// One study: a cross product of protocols, traffic types, node densities and
// swept parameter values, each cell run over several seeds.  While pause
// varies, speed is pinned, and vice versa; both pins are explicit.
struct SweepGrid {
  SweepAxis axis = SweepAxis::Both;
  std::vector<double> pause_values = {50, 100, 150, 200, 250};
  std::vector<double> speed_values = {5, 10, 15, 20, 25};
  double pinned_pause = 50;  // seconds, held while speed varies
  double pinned_speed = 15;  // m/s, held while pause varies
  std::vector<int> node_counts = {30, 90, 150};
  std::vector<Protocol> protocols = {Protocol::Aodv, Protocol::Dsr};
  std::vector<TrafficKind> traffics = {TrafficKind::Cbr, TrafficKind::Tcp};
  int seeds_per_cell = 5;
  std::uint64_t base_seed = 1;
  ScenarioConfig base;  // every field the grid does not control

  void validate() const;
};

// Same `key = value` format as scenario configs plus the grid keys (axis,
// pause_values, ...).  Keys the grid controls per cell (protocol, traffic,
// nodes, pause, v_max, seed) are rejected with a pointer to the list key.
SweepGrid parse_grid(std::istream& in, const std::string& origin);
SweepGrid parse_grid_text(std::string_view text, const std::string& origin);
SweepGrid load_grid(const std::string& path);

// One (swept value, density, protocol, traffic) combination.
struct SweepCell {
  SweepKind kind = SweepKind::Pause;
  double value = 0;  // the swept pause (s) or speed (m/s)
  int nodes = 0;
  Protocol protocol = Protocol::Aodv;
  TrafficKind traffic = TrafficKind::Cbr;

  std::string id() const;  // e.g. "pause50-n30-aodv-cbr"
  ScenarioConfig config(const SweepGrid& grid, std::uint64_t seed) const;
};

// Cells in output order: axis, swept value, node count, protocol, traffic.
// Seeds base_seed .. base_seed + seeds_per_cell - 1 apply to every cell, so
// runs differing only in protocol or traffic share motion and flow layout.
std::vector<SweepCell> expand(const SweepGrid& grid);

struct SweepOptions {
  std::string out_dir = "sweep-out";
  int jobs = 1;
  bool keep_traces = false;  // traces/<cell>-s<seed>.tr under out_dir
  bool quiet = false;
};

struct SweepOutcome {
  std::string csv;          // results.csv content
  std::string tables_text;  // tables.txt content
  std::string tables_csv;   // tables.csv content
  std::vector<std::string> failures;
  int runs = 0;
};

// Runs every cell x seed (cells may run on `jobs` threads; aggregation is a
// deterministic single-threaded reduction), writes results.csv, tables.txt,
// tables.csv and failures.txt under out_dir, and returns the same content.
// A failed run is recorded and skipped; its cell's median covers the seeds
// that succeeded.
SweepOutcome run_sweep(const SweepGrid& grid, const SweepOptions& opts);

struct DecisionTables {
  std::string text;
  std::string csv;
};

// Rebuilds the regime decision tables from results.csv content alone, so a
// stored CSV re-renders byte-identically to what the sweep emitted.  Per
// swept axis the extremes of node density map to low/high mobility and the
// extremes of the swept value to low/high pause (or speed); regimes whose
// twelve cells are not all present are skipped.
DecisionTables build_tables_from_csv(const std::string& csv_text);

}  // namespace vanet
