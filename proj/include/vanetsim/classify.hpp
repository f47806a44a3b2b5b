#pragma once

#include <string>
#include <vector>

#include "vanetsim/metrics.hpp"
#include "vanetsim/types.hpp"

namespace vanet {

enum class Band { Low, Average, High };
enum class SweepKind { Pause, Speed };
enum class MetricKind { Pdr, E2e, Lpr };

const char* band_name(Band b);        // "Low" / "Avg" / "High"
const char* metric_name(MetricKind m);
const char* sweep_kind_name(SweepKind k);
SweepKind sweep_kind_from_string(std::string_view s);

// Band thresholds.  The published edges leave gaps (e.g. a PDR of 97.5 sits
// between "96 to 97" and ">= 98"); bands close them at the lower boundary:
//   PDR  (both sweeps):  High [98, inf)   Avg [96, 98)    Low (-inf, 96)
//   E2E  pause sweep:    High [351, inf)  Avg [151, 351)  Low (-inf, 151)  ms
//   E2E  speed sweep:    High [150, inf)  Avg [51, 150)   Low (-inf, 51)   ms
//   LPR  pause sweep:    High (2, inf)    Avg [1, 2]      Low (-inf, 1)    %
//   LPR  speed sweep:    High (3, inf)    Avg [1.5, 3]    Low (-inf, 1.5)  %
// LPR keeps its published strict ">" upper band, which already tiles the
// line.  The speed-sweep E2E thresholds are read as milliseconds.
Band classify_pdr(double pdr_percent);
Band classify_e2e(double avg_ms, SweepKind k);
Band classify_lpr(double lpr_percent, SweepKind k);

struct BandReport {
  Band pdr = Band::Low;
  Band e2e = Band::Low;
  Band lpr = Band::Low;
};

BandReport classify(const MetricsReport& report, SweepKind k);

// One entry of a decision table: the band of one metric for one
// (protocol, traffic) combination under a given regime.
struct DecisionCell {
  Protocol protocol = Protocol::Aodv;
  TrafficKind traffic = TrafficKind::Cbr;
  MetricKind metric = MetricKind::Pdr;
  Band band = Band::Low;
};

// Two data rows (AODV, DSR) by six columns (PDR/E2E/LPR crossed with
// TCP/CBR).  Throws if any of the twelve cells is missing, naming it.
std::string render_decision_table_text(const std::string& title,
                                       const std::vector<DecisionCell>& cells);
std::string render_decision_table_csv(const std::string& regime_id,
                                      const std::vector<DecisionCell>& cells);

}  // namespace vanet
