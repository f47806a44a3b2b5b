#include "vanetsim/tracelog.hpp"

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "vanetsim/rng.hpp"

using namespace vanet;

namespace {

TraceRecord random_record(RngStream& rng, SimTime at_least) {
  constexpr std::array<TraceEvent, 4> events{TraceEvent::Send, TraceEvent::Recv,
                                             TraceEvent::Drop,
                                             TraceEvent::Forward};
  constexpr std::array<TraceLayer, 3> layers{TraceLayer::Agt, TraceLayer::Rtr,
                                             TraceLayer::Mac};
  constexpr std::array<PktType, 6> types{PktType::Cbr,  PktType::Tcp,
                                         PktType::Ack,  PktType::Rreq,
                                         PktType::Rrep, PktType::Rerr};
  TraceRecord r;
  r.event = events[rng.uniform_int(0, 3)];
  r.time = at_least + rng.uniform_int(0, 2'000'000);
  r.node = static_cast<NodeId>(rng.uniform_int(0, 499));
  r.layer = layers[rng.uniform_int(0, 2)];
  r.seqno = rng.uniform_int(0, 1'000'000);
  r.type = types[rng.uniform_int(0, 5)];
  r.size = static_cast<int>(rng.uniform_int(1, 4096));
  r.flow.src = static_cast<NodeId>(rng.uniform_int(0, 499));
  r.flow.dst = static_cast<NodeId>(rng.uniform_int(0, 499));
  r.flow.sport = static_cast<int>(rng.uniform_int(0, 255));
  r.flow.dport = static_cast<int>(rng.uniform_int(0, 255));
  return r;
}

}  // namespace

TEST_CASE("emit renders the documented field layout") {
  TraceRecord r;
  r.event = TraceEvent::Send;
  r.time = 1 * kMicrosPerSecond;
  r.node = 3;
  r.layer = TraceLayer::Agt;
  r.seqno = 7;
  r.type = PktType::Cbr;
  r.size = 512;
  r.flow = FlowKey{1, 5, 0, 0};
  CHECK(emit_trace_line(r) == "s 1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]");

  r.event = TraceEvent::Drop;
  r.time = 12'345'678;
  r.node = 42;
  r.layer = TraceLayer::Rtr;
  r.seqno = 0;
  r.type = PktType::Rerr;
  r.size = 40;
  r.flow = FlowKey{9, 12, 255, 255};
  CHECK(emit_trace_line(r) ==
        "D 12.345678000 _42_ RTR --- 0 rerr 40 [9:255 12:255]");
}

TEST_CASE("parse is the exact inverse of emit") {
  RngStream rng(2024, "topology");
  for (int i = 0; i < 10'000; ++i) {
    TraceRecord r = random_record(rng, 0);
    TraceRecord back = parse_trace_line(emit_trace_line(r));
    CHECK(back == r);
  }
}

TEST_CASE("malformed lines are rejected with the offending field named") {
  const struct {
    const char* line;
    const char* expect;  // substring of the error
  } cases[] = {
      {"", "expected 10 fields"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 512 [1:0", "missing field 10"},
      {"x 1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "unknown event"},
      {"s 1.0 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "9 digits"},
      {"s 1.0000000005 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "9 digits"},
      {"s 1.000000100 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "microsecond"},
      {"s -1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "non-negative"},
      {"s 1.000000000 3 AGT --- 7 cbr 512 [1:0 5:0]", "_<id>_"},
      {"s 1.000000000 _3_ APP --- 7 cbr 512 [1:0 5:0]", "unknown layer"},
      {"s 1.000000000 _3_ AGT -- 7 cbr 512 [1:0 5:0]", "'---' separator"},
      {"s 1.000000000 _3_ AGT --- x cbr 512 [1:0 5:0]", "seqno"},
      {"s 1.000000000 _3_ AGT --- 7 pkt 512 [1:0 5:0]", "unknown packet type"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 0 [1:0 5:0]", "size must be positive"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 512 1:0 5:0]", "start with '['"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0", "end with ']'"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 512 [10 5:0]", "<node>:<port>"},
      {"s 1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0] extra", "got more"},
      {"s  1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]", "spacing"},
  };
  int rejected = 0;
  for (const auto& c : cases) {
    try {
      parse_trace_line(c.line);
      FAIL("accepted malformed line: ", c.line);
    } catch (const TraceParseError& e) {
      ++rejected;
      CHECK_MESSAGE(std::string(e.what()).find(c.expect) != std::string::npos,
                    "error for '", c.line, "' was: ", e.what());
    }
  }
  CHECK(rejected >= 10);
}

TEST_CASE("stream parse reports 1-based line numbers") {
  std::istringstream in(
      "s 1.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]\n"
      "bogus line here that does not parse at all x\n");
  try {
    parse_trace_stream(in);
    FAIL("accepted malformed stream");
  } catch (const TraceParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("stream parse rejects decreasing times") {
  std::istringstream in(
      "s 2.000000000 _3_ AGT --- 7 cbr 512 [1:0 5:0]\n"
      "s 1.000000000 _3_ AGT --- 8 cbr 512 [1:0 5:0]\n");
  try {
    parse_trace_stream(in);
    FAIL("accepted decreasing times");
  } catch (const TraceParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("decreases") != std::string::npos);
  }
}

TEST_CASE("stream parse round-trips a whole file") {
  RngStream rng(77, "topology");
  std::vector<TraceRecord> records;
  SimTime t = 0;
  for (int i = 0; i < 500; ++i) {
    records.push_back(random_record(rng, t));
    t = records.back().time;
  }
  std::string text;
  for (const TraceRecord& r : records) text += emit_trace_line(r) + "\n";
  std::istringstream in(text);
  CHECK(parse_trace_stream(in) == records);
}

TEST_CASE("trace log filter trims memory but never the attached stream") {
  TraceRecord agt_send;
  agt_send.event = TraceEvent::Send;
  agt_send.layer = TraceLayer::Agt;
  agt_send.size = 512;
  TraceRecord rtr_fwd = agt_send;
  rtr_fwd.event = TraceEvent::Forward;
  rtr_fwd.layer = TraceLayer::Rtr;
  TraceRecord mac_drop = agt_send;
  mac_drop.event = TraceEvent::Drop;
  mac_drop.layer = TraceLayer::Mac;

  SUBCASE("unfiltered keeps everything") {
    TraceLog log;
    log.record(agt_send);
    log.record(rtr_fwd);
    log.record(mac_drop);
    CHECK(log.records().size() == 3);
    CHECK(log.emitted() == 3);
  }

  SUBCASE("filtered keeps agent records and drops at any layer") {
    std::ostringstream file;
    TraceLog log(true);
    log.attach(&file);
    log.record(agt_send);
    log.record(rtr_fwd);
    log.record(mac_drop);
    CHECK(log.records().size() == 2);  // AGT send + MAC drop
    CHECK(log.records()[0].layer == TraceLayer::Agt);
    CHECK(log.records()[1].event == TraceEvent::Drop);
    CHECK(log.emitted() == 3);
    // the file saw all three lines
    int lines = 0;
    for (char c : file.str())
      if (c == '\n') ++lines;
    CHECK(lines == 3);
  }
}
