#include "vanetsim/tracelog.hpp"

#include <cassert>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace vanet {

const char* trace_event_token(TraceEvent e) {
  switch (e) {
    case TraceEvent::Send: return "s";
    case TraceEvent::Recv: return "r";
    case TraceEvent::Drop: return "D";
    case TraceEvent::Forward: return "f";
  }
  return "?";
}

const char* trace_layer_token(TraceLayer l) {
  switch (l) {
    case TraceLayer::Agt: return "AGT";
    case TraceLayer::Rtr: return "RTR";
    case TraceLayer::Mac: return "MAC";
  }
  return "?";
}

const char* pkt_type_token(PktType t) {
  switch (t) {
    case PktType::Cbr: return "cbr";
    case PktType::Tcp: return "tcp";
    case PktType::Ack: return "ack";
    case PktType::Rreq: return "rreq";
    case PktType::Rrep: return "rrep";
    case PktType::Rerr: return "rerr";
  }
  return "?";
}

std::string emit_trace_line(const TraceRecord& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s %s _%d_ %s --- %ld %s %d [%d:%d %d:%d]",
                trace_event_token(r.event), format_trace_time(r.time).c_str(),
                r.node, trace_layer_token(r.layer), r.seqno,
                pkt_type_token(r.type), r.size, r.flow.src, r.flow.sport,
                r.flow.dst, r.flow.dport);
  return buf;
}

namespace {

const char* const kFieldNames[10] = {
    "event", "time",      "node", "layer", "separator",
    "seqno", "pkt type",  "size", "flow src:sport", "flow dst:dport"};

[[noreturn]] void fail(const std::string& what) { throw TraceParseError(what); }

long parse_nonneg(std::string_view tok, const char* field) {
  long v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size() || v < 0)
    fail(std::string(field) + " must be a non-negative integer, got '" +
         std::string(tok) + "'");
  return v;
}

TraceEvent parse_event(std::string_view tok) {
  if (tok == "s") return TraceEvent::Send;
  if (tok == "r") return TraceEvent::Recv;
  if (tok == "D") return TraceEvent::Drop;
  if (tok == "f") return TraceEvent::Forward;
  fail("unknown event token '" + std::string(tok) + "'");
}

TraceLayer parse_layer(std::string_view tok) {
  if (tok == "AGT") return TraceLayer::Agt;
  if (tok == "RTR") return TraceLayer::Rtr;
  if (tok == "MAC") return TraceLayer::Mac;
  fail("unknown layer token '" + std::string(tok) + "'");
}

PktType parse_type(std::string_view tok) {
  if (tok == "cbr") return PktType::Cbr;
  if (tok == "tcp") return PktType::Tcp;
  if (tok == "ack") return PktType::Ack;
  if (tok == "rreq") return PktType::Rreq;
  if (tok == "rrep") return PktType::Rrep;
  if (tok == "rerr") return PktType::Rerr;
  fail("unknown packet type token '" + std::string(tok) + "'");
}

SimTime parse_time(std::string_view tok) {
  auto dot = tok.find('.');
  if (dot == std::string_view::npos || tok.size() - dot - 1 != 9)
    fail("time must be <seconds>.<9 digits>, got '" + std::string(tok) + "'");
  long sec = parse_nonneg(tok.substr(0, dot), "time seconds");
  long nanos = parse_nonneg(tok.substr(dot + 1), "time fraction");
  if (nanos % 1000 != 0)
    fail("time '" + std::string(tok) + "' is not microsecond-aligned");
  return static_cast<SimTime>(sec) * kMicrosPerSecond + nanos / 1000;
}

NodeId parse_node(std::string_view tok) {
  if (tok.size() < 3 || tok.front() != '_' || tok.back() != '_')
    fail("node must be _<id>_, got '" + std::string(tok) + "'");
  return static_cast<NodeId>(
      parse_nonneg(tok.substr(1, tok.size() - 2), "node id"));
}

// "<node>:<port>" with optional surrounding bracket already stripped.
std::pair<NodeId, int> parse_endpoint(std::string_view tok, const char* field) {
  auto colon = tok.find(':');
  if (colon == std::string_view::npos)
    fail(std::string(field) + " must be <node>:<port>, got '" +
         std::string(tok) + "'");
  long node = parse_nonneg(tok.substr(0, colon), field);
  long port = parse_nonneg(tok.substr(colon + 1), field);
  return {static_cast<NodeId>(node), static_cast<int>(port)};
}

}  // namespace

TraceRecord parse_trace_line(std::string_view line) {
  std::string_view tok[10];
  std::size_t n = 0;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t sp = line.find(' ', pos);
    if (sp == std::string_view::npos) sp = line.size();
    if (sp == pos) fail("malformed spacing (empty field)");
    if (n == 10) fail("expected 10 fields, got more");
    tok[n++] = line.substr(pos, sp - pos);
    pos = sp + 1;
  }
  if (n < 10)
    fail("expected 10 fields, got " + std::to_string(n) + "; missing field " +
         std::to_string(n + 1) + " (" + kFieldNames[n] + ")");

  TraceRecord r;
  r.event = parse_event(tok[0]);
  r.time = parse_time(tok[1]);
  r.node = parse_node(tok[2]);
  r.layer = parse_layer(tok[3]);
  if (tok[4] != "---")
    fail("expected '---' separator, got '" + std::string(tok[4]) + "'");
  r.seqno = parse_nonneg(tok[5], "seqno");
  r.type = parse_type(tok[6]);
  long size = parse_nonneg(tok[7], "size");
  if (size == 0) fail("size must be positive");
  r.size = static_cast<int>(size);
  if (tok[8].empty() || tok[8].front() != '[')
    fail("flow src must start with '[', got '" + std::string(tok[8]) + "'");
  if (tok[9].empty() || tok[9].back() != ']')
    fail("flow dst must end with ']', got '" + std::string(tok[9]) + "'");
  auto [src, sport] = parse_endpoint(tok[8].substr(1), "flow src:sport");
  auto [dst, dport] =
      parse_endpoint(tok[9].substr(0, tok[9].size() - 1), "flow dst:dport");
  r.flow = FlowKey{src, dst, sport, dport};
  return r;
}

std::vector<TraceRecord> parse_trace_stream(std::istream& in) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    try {
      out.push_back(parse_trace_line(line));
    } catch (const TraceParseError& e) {
      fail("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (out.size() > 1 && out[out.size() - 2].time > out.back().time)
      fail("line " + std::to_string(lineno) + ": time decreases");
  }
  return out;
}

std::vector<TraceRecord> parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open trace file '" + path + "'");
  return parse_trace_stream(in);
}

void TraceLog::record(const TraceRecord& r) {
  assert(r.time >= last_time_ && "trace times must be non-decreasing");
  last_time_ = r.time;
  ++emitted_;
  if (out_) *out_ << emit_trace_line(r) << '\n';
  if (agt_and_drops_only_ && r.layer != TraceLayer::Agt &&
      r.event != TraceEvent::Drop)
    return;
  records_.push_back(r);
}

}  // namespace vanet
