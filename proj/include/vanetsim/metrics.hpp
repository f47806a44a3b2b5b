#pragma once

#include <span>
#include <stdexcept>

#include "vanetsim/tracelog.hpp"

namespace vanet {

struct NoTrafficError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MetricsReport {
  long n_sent = 0;       // AGT "s" records
  long n_received = 0;   // AGT "r" records
  double pdr = 0;        // percent
  double lpr = 0;        // percent, exact complement of pdr
  double avg_e2e_ms = 0; // mean delay over received packets, milliseconds
  long delay_count = 0;  // packets with a measured delay
};

// PDR / LPR / average end-to-end delay over a time-ordered record sequence.
// Sends and receives are AGT records of the requested data type; delays key
// on (flow, seqno) with AGT endpoints only, and average only over packets
// actually received.  Zero sent packets is an explicit error, never a
// division by zero.
MetricsReport compute_metrics(std::span<const TraceRecord> records,
                              PktType data_type);

// Literal emulation of the awk analysis scripts, quirks preserved: send and
// receive counts take every AGT record regardless of type, the delay end
// time is taken from an "r" at any layer whose type matches, and the
// start/end tables are indexed by seqno alone so concurrent flows collapse
// onto one slot (later writes win).  Diverges from compute_metrics on
// multi-flow or multi-hop traces; identical on single-flow traces with AGT
// endpoints only.
MetricsReport compute_metrics_script_compat(std::span<const TraceRecord>,
                                            PktType data_type);

}  // namespace vanet
