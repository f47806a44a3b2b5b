#include <vector>

#include "doctest.h"
#include "sim_fixtures.hpp"
#include "vanetsim/traffic.hpp"

using namespace vanet;

namespace {

// Captures everything the transport hands down; nothing reaches a medium.
struct StubAgent : RoutingAgent {
  using RoutingAgent::RoutingAgent;
  std::vector<Packet> originated;
  void originate(Packet pkt) override { originated.push_back(std::move(pkt)); }
  void receive(Packet, NodeId) override {}
  void on_link_break(const Packet&, NodeId) override {}
};

struct Loop {
  Engine engine;
  TraceLog trace;
  long uid = 0;
  StubAgent agent;

  Loop()
      : agent(AgentContext{0, &engine, nullptr, &trace, {}, &uid}) {}
};

Packet make_ack(long ackno) {
  Packet a;
  a.kind = PacketKind::Ack;
  a.trace_type = PktType::Ack;
  a.ackno = ackno;
  a.seqno = ackno;
  a.payload_size = kAckSize;
  return a;
}

Packet make_seg(const FlowSpec& f, long seqno) {
  Packet p;
  p.flow = f.key();
  p.seqno = seqno;
  p.kind = PacketKind::Data;
  p.trace_type = PktType::Tcp;
  p.payload_size = f.tcp_segment;
  return p;
}

std::vector<SimTime> agt_send_times(const TraceLog& trace, PktType type) {
  std::vector<SimTime> out;
  for (const TraceRecord& r : trace.records())
    if (r.event == TraceEvent::Send && r.layer == TraceLayer::Agt &&
        r.type == type)
      out.push_back(r.time);
  return out;
}

long rtr_resend_count(const TraceLog& trace) {
  long n = 0;
  for (const TraceRecord& r : trace.records())
    if (r.event == TraceEvent::Send && r.layer == TraceLayer::Rtr &&
        r.type == PktType::Tcp)
      ++n;
  return n;
}

}  // namespace

TEST_CASE("constant bit rate emission lands exactly on the interval grid") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Cbr;
  f.start_at = time_from_seconds(1);
  f.stop_at = time_from_seconds(3);
  f.cbr_size = 512;
  f.cbr_interval = 250000;

  CbrSource src(net.engine, net.trace, net.agent, f, &net.uid);
  src.start();
  net.engine.run(time_from_seconds(10));

  std::vector<SimTime> expect;
  for (long k = 0; k < 8; ++k) expect.push_back(1000000 + k * 250000);
  CHECK(agt_send_times(net.trace, PktType::Cbr) == expect);
  CHECK(src.emitted() == 8);

  REQUIRE(net.agent.originated.size() == 8);
  for (long k = 0; k < 8; ++k) {
    const Packet& p = net.agent.originated[k];
    CHECK(p.seqno == k);
    CHECK(p.kind == PacketKind::Data);
    CHECK(p.payload_size == 512);
    CHECK(p.flow == f.key());
  }
}

TEST_CASE("emission count is the interval count rounded up, stop exclusive") {
  struct Case {
    double start, stop, interval;
    long expect;
  };
  // stop lands on the grid in the first case and off it in the second
  for (const Case& c : {Case{1, 2, 0.25, 4}, Case{0.5, 1.0, 0.3, 2},
                        Case{0, 200, 0.25, 800}, Case{5, 5, 0.25, 0},
                        Case{7, 3, 0.25, 0}}) {
    Loop net;
    FlowSpec f;
    f.kind = TrafficKind::Cbr;
    f.start_at = time_from_seconds(c.start);
    f.stop_at = time_from_seconds(c.stop);
    f.cbr_interval = time_from_seconds(c.interval);
    CbrSource src(net.engine, net.trace, net.agent, f, &net.uid);
    src.start();
    net.engine.run(time_from_seconds(300));

    long span = f.stop_at - f.start_at;
    long oracle =
        span <= 0 ? 0 : (span + f.cbr_interval - 1) / f.cbr_interval;
    CHECK(src.emitted() == oracle);
    CHECK(src.emitted() == c.expect);
  }
}

TEST_CASE("the datagram sink counts and logs each arrival") {
  Loop net;
  FlowSpec f;
  f.src = 3;
  f.dst = 7;
  CbrSink sink(net.engine, net.trace, f);

  Packet p;
  p.flow = f.key();
  p.seqno = 4;
  p.payload_size = 512;
  sink.on_data(p);

  CHECK(sink.received() == 1);
  REQUIRE(net.trace.records().size() == 1);
  const TraceRecord& r = net.trace.records()[0];
  CHECK(r.event == TraceEvent::Recv);
  CHECK(r.layer == TraceLayer::Agt);
  CHECK(r.node == 7);
  CHECK(r.seqno == 4);
  CHECK(r.size == 512);
}

TEST_CASE("slow start opens the window by one segment per ack") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(0);

  CHECK(snd.cwnd() == 1);
  CHECK(snd.ssthresh() == 32);
  CHECK(snd.rto() == time_from_seconds(3));
  CHECK(net.agent.originated.size() == 1);  // window of one

  snd.on_ack(make_ack(1));
  CHECK(snd.cwnd() == 2);
  CHECK(snd.in_flight() == 2);
  // an instant ack samples a zero round trip: the timer floor kicks in
  CHECK(snd.rto() == time_from_seconds(1));

  snd.on_ack(make_ack(2));
  CHECK(snd.cwnd() == 3);
  CHECK(snd.in_flight() == 3);
  CHECK(snd.snd_una() == 2);

  // the agent layer announced each segment exactly once
  CHECK(agt_send_times(net.trace, PktType::Tcp).size() ==
        net.agent.originated.size());
}

TEST_CASE("a timeout halves ssthresh, resets the window, and doubles the timer") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(0);
  for (long a = 1; a <= 9; ++a) snd.on_ack(make_ack(a));
  REQUIRE(snd.cwnd() == 10);
  REQUIRE(snd.rto() == time_from_seconds(1));

  net.engine.run(time_from_seconds(2));  // nothing acked: timer fires at t=1

  CHECK(snd.ssthresh() == 5);
  CHECK(snd.cwnd() == 1);
  CHECK(snd.rto() == time_from_seconds(2));

  // the retransmission reuses the oldest unacked seqno below the agent layer
  CHECK(rtr_resend_count(net.trace) == 1);
  CHECK(net.agent.originated.back().seqno == snd.snd_una());

  // recovery climbs by slow start until ssthresh, then by reciprocal steps
  long base = snd.snd_una();
  for (long a = 1; a <= 4; ++a) snd.on_ack(make_ack(base + a));
  CHECK(snd.cwnd() == 5);
  snd.on_ack(make_ack(base + 5));
  CHECK(snd.cwnd() == doctest::Approx(5.2));
}

TEST_CASE("congestion avoidance adds the reciprocal of the window") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(0);

  for (long a = 1; a <= 15; ++a) snd.on_ack(make_ack(a));
  REQUIRE(snd.cwnd() == 16);
  net.engine.run(time_from_seconds(2));
  REQUIRE(snd.ssthresh() == 8);
  REQUIRE(snd.cwnd() == 1);

  long base = snd.snd_una();
  for (long a = 1; a <= 7; ++a) snd.on_ack(make_ack(base + a));
  CHECK(snd.cwnd() == 8);

  snd.on_ack(make_ack(base + 8));
  CHECK(snd.cwnd() == 8.125);
}

TEST_CASE("acks that do not advance the window are counted, nothing more") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(0);
  snd.on_ack(make_ack(1));

  std::size_t sends = net.agent.originated.size();
  double cwnd = snd.cwnd();
  snd.on_ack(make_ack(1));
  snd.on_ack(make_ack(0));

  CHECK(snd.duplicate_acks() == 2);
  CHECK(snd.cwnd() == cwnd);
  CHECK(snd.snd_una() == 1);
  CHECK(net.agent.originated.size() == sends);
}

TEST_CASE("a retransmitted segment never feeds the round trip estimate") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(time_from_seconds(4));  // initial timer fires at t=3

  REQUIRE(rtr_resend_count(net.trace) == 1);
  REQUIRE(snd.rto() == time_from_seconds(6));

  snd.on_ack(make_ack(1));  // acks only the poisoned segment
  CHECK(snd.rto() == time_from_seconds(6));
  CHECK(snd.snd_una() == 1);
}

TEST_CASE("round trip smoothing follows the standard weights") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(0);

  // first sample 2.5 s: srtt 2.5, rttvar 1.25, rto 7.5
  net.engine.run(time_from_seconds(2.5));
  snd.on_ack(make_ack(1));
  CHECK(snd.rto() == time_from_seconds(7.5));

  // second sample 0.5 s: srtt 2.25, rttvar 1.4375, rto exactly 8
  net.engine.run(time_from_seconds(3.0));
  snd.on_ack(make_ack(2));
  CHECK(snd.rto() == time_from_seconds(8));
}

TEST_CASE("repeated timeouts cap the timer and finally abort the flow") {
  Loop net;
  FlowSpec f;
  f.kind = TrafficKind::Tcp;
  f.stop_at = time_from_seconds(1000);
  ReliableSender snd(net.engine, net.trace, net.agent, f, &net.uid);
  snd.start();
  net.engine.run(time_from_seconds(700));

  CHECK(snd.aborted());
  CHECK(snd.rto() == time_from_seconds(64));
  CHECK(rtr_resend_count(net.trace) == 12);  // the 13th timeout gives up
  CHECK(agt_send_times(net.trace, PktType::Tcp).size() == 1);

  // a late ack changes nothing once aborted
  snd.on_ack(make_ack(1));
  CHECK(snd.snd_una() == 0);
}

TEST_CASE("the receiver releases segments strictly in order and acks every arrival") {
  Loop net;
  FlowSpec f;
  f.src = 0;
  f.dst = 1;
  f.kind = TrafficKind::Tcp;
  ReliableReceiver rcv(net.engine, net.trace, net.agent, f, &net.uid);

  rcv.on_data(make_seg(f, 0));
  CHECK(rcv.delivered() == 1);

  rcv.on_data(make_seg(f, 2));  // held back, still acked
  CHECK(rcv.delivered() == 1);

  rcv.on_data(make_seg(f, 1));  // fills the gap, releases both
  CHECK(rcv.delivered() == 3);
  CHECK(rcv.delivery_order() == std::vector<long>{0, 1, 2});

  rcv.on_data(make_seg(f, 0));  // stale duplicate
  CHECK(rcv.delivered() == 3);

  // agent-level receive records exist only for in-order deliveries
  std::vector<long> agt_seqnos;
  for (const TraceRecord& r : net.trace.records())
    if (r.event == TraceEvent::Recv && r.layer == TraceLayer::Agt)
      agt_seqnos.push_back(r.seqno);
  CHECK(agt_seqnos == std::vector<long>{0, 1, 2});

  // every arrival produced one cumulative ack on the reversed flow
  REQUIRE(net.agent.originated.size() == 4);
  std::vector<long> acknos;
  for (const Packet& p : net.agent.originated) {
    CHECK(p.kind == PacketKind::Ack);
    CHECK(p.payload_size == kAckSize);
    CHECK(p.flow == f.ack_key());
    acknos.push_back(p.ackno);
  }
  CHECK(acknos == std::vector<long>{1, 1, 3, 3});
}

TEST_CASE("reliable transfer over a two node link stays ordered and gap free") {
  test::TestNet net(test::line(2, 200));
  FlowSpec f;
  f.src = 0;
  f.dst = 1;
  f.kind = TrafficKind::Tcp;
  f.start_at = 0;
  f.stop_at = time_from_seconds(5);

  ReliableSender snd(net.engine, net.trace, *net.agents[0], f, &net.uid);
  ReliableReceiver rcv(net.engine, net.trace, *net.agents[1], f, &net.uid);
  net.sinks[1] = [&](const Packet& p) {
    if (p.kind == PacketKind::Data) rcv.on_data(p);
  };
  net.sinks[0] = [&](const Packet& p) {
    if (p.kind == PacketKind::Ack) snd.on_ack(p);
  };

  snd.start();
  net.engine.run(time_from_seconds(20));

  CHECK_FALSE(snd.aborted());
  CHECK(snd.snd_una() == snd.next_seq());  // everything sent was acked
  CHECK(rcv.delivered() == snd.next_seq());
  CHECK(snd.cwnd() > 2);

  const std::vector<long>& order = rcv.delivery_order();
  REQUIRE_FALSE(order.empty());
  for (long s = 0; s < static_cast<long>(order.size()); ++s)
    CHECK(order[s] == s);

  // acks stay invisible at the agent layer
  for (const TraceRecord& r : net.trace.records())
    if (r.layer == TraceLayer::Agt) CHECK(r.type != PktType::Ack);
}
