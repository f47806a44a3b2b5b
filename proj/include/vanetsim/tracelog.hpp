#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vanetsim/packet.hpp"
#include "vanetsim/sim_time.hpp"

namespace vanet {

enum class TraceEvent { Send, Recv, Drop, Forward };  // s r D f
enum class TraceLayer { Agt, Rtr, Mac };

// One event line of the trace format.  Serialized field order is fixed:
//   <event> <sec.9dp> _<node>_ <layer> --- <seqno> <type> <size> [<src>:<sport> <dst>:<dport>]
// which puts event/time/layer/seqno/type at the positions the analysis
// scripts index as $1/$2/$4/$6/$7.
struct TraceRecord {
  TraceEvent event = TraceEvent::Send;
  SimTime time = 0;
  NodeId node = 0;
  TraceLayer layer = TraceLayer::Agt;
  long seqno = 0;
  PktType type = PktType::Cbr;
  int size = 0;
  FlowKey flow;

  bool operator==(const TraceRecord&) const = default;
};

struct TraceParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* trace_event_token(TraceEvent e);
const char* trace_layer_token(TraceLayer l);
const char* pkt_type_token(PktType t);

std::string emit_trace_line(const TraceRecord& r);

// Strict inverse of emit_trace_line.  Malformed input raises TraceParseError
// naming the offending field; unknown tokens are rejected, never skipped.
TraceRecord parse_trace_line(std::string_view line);

// Whole-file parse; errors carry 1-based line numbers.  Also rejects files
// whose time field ever decreases.
std::vector<TraceRecord> parse_trace_stream(std::istream& in);
std::vector<TraceRecord> parse_trace_file(const std::string& path);

// Trace sink for one simulation run: collects records in memory and
// optionally appends lines to a stream.  Times must be non-decreasing.
// agt_and_drops_only keeps just the records the metrics pipeline consumes,
// which caps memory during large sweeps.
class TraceLog {
 public:
  explicit TraceLog(bool agt_and_drops_only = false)
      : agt_and_drops_only_(agt_and_drops_only) {}

  void attach(std::ostream* out) { out_ = out; }

  void record(const TraceRecord& r);

  const std::vector<TraceRecord>& records() const { return records_; }
  std::size_t emitted() const { return emitted_; }

 private:
  std::vector<TraceRecord> records_;
  std::ostream* out_ = nullptr;
  bool agt_and_drops_only_ = false;
  std::size_t emitted_ = 0;
  SimTime last_time_ = 0;
};

}  // namespace vanet
