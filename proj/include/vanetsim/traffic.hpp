#pragma once

#include <map>
#include <set>
#include <vector>

#include "vanetsim/engine.hpp"
#include "vanetsim/routing.hpp"
#include "vanetsim/tracelog.hpp"
#include "vanetsim/types.hpp"

namespace vanet {

struct FlowSpec {
  NodeId src = 0;
  NodeId dst = 0;
  int sport = 0;
  int dport = 0;
  TrafficKind kind = TrafficKind::Cbr;
  SimTime start_at = 0;
  SimTime stop_at = 0;       // no emission at or after this instant
  int cbr_size = 512;        // bytes
  SimTime cbr_interval = 250000;
  int tcp_segment = 1040;    // bytes

  FlowKey key() const { return {src, dst, sport, dport}; }
  FlowKey ack_key() const { return {dst, src, dport, sport}; }
};

// Fixed-size, fixed-interval datagram source.  Emission k happens at exactly
// start_at + k * cbr_interval, strictly before stop_at; nothing is ever
// acknowledged or retransmitted.
class CbrSource {
 public:
  CbrSource(Engine& engine, TraceLog& trace, RoutingAgent& agent,
            FlowSpec flow, long* uid_counter);
  void start();
  long emitted() const { return next_seq_; }

 private:
  void emit();

  Engine& engine_;
  TraceLog& trace_;
  RoutingAgent& agent_;
  FlowSpec flow_;
  long* uid_counter_;
  long next_seq_ = 0;
};

class CbrSink {
 public:
  CbrSink(Engine& engine, TraceLog& trace, FlowSpec flow)
      : engine_(engine), trace_(trace), flow_(flow) {}
  void on_data(const Packet& pkt);
  long received() const { return received_; }

 private:
  Engine& engine_;
  TraceLog& trace_;
  FlowSpec flow_;
  long received_ = 0;
};

// Reliable transport sender: fixed-size segments from an unbounded backlog,
// cumulative acks, one retransmission timer for the oldest unacked segment,
// slow start / congestion avoidance, and timeout-only loss recovery
// (ssthresh = max(cwnd/2, 2), cwnd = 1, rto doubles).  Retransmissions never
// produce a second agent-level send record.
class ReliableSender {
 public:
  ReliableSender(Engine& engine, TraceLog& trace, RoutingAgent& agent,
                 FlowSpec flow, long* uid_counter);
  void start();
  void on_ack(const Packet& ack);

  double cwnd() const { return cwnd_; }
  double ssthresh() const { return ssthresh_; }
  long snd_una() const { return snd_una_; }
  long next_seq() const { return next_seq_; }
  long highest_acked() const { return snd_una_ - 1; }
  SimTime rto() const { return rto_; }
  bool aborted() const { return aborted_; }
  long duplicate_acks() const { return duplicate_acks_; }
  long in_flight() const { return next_seq_ - snd_una_; }

 private:
  void try_send();
  void send_segment(long seq, bool retransmit);
  void arm_timer();
  void on_timeout();

  Engine& engine_;
  TraceLog& trace_;
  RoutingAgent& agent_;
  FlowSpec flow_;
  long* uid_counter_;

  double cwnd_ = 1;
  double ssthresh_ = 32;
  long next_seq_ = 0;
  long snd_una_ = 0;
  SimTime rto_;
  double srtt_ = 0;
  double rttvar_ = 0;
  bool have_rtt_ = false;
  int retries_ = 0;  // consecutive timeouts of the current oldest segment
  bool aborted_ = false;
  long duplicate_acks_ = 0;
  Engine::Handle timer_ = 0;
  bool timer_armed_ = false;
  // per in-flight segment: first send time, poisoned for RTT once retransmitted
  std::map<long, std::pair<SimTime, bool>> sent_;
};

// Reassembling sink: delivers the segment stream strictly in order (agent
// receive records appear only at in-order delivery) and acks cumulatively on
// every arrival.
class ReliableReceiver {
 public:
  ReliableReceiver(Engine& engine, TraceLog& trace, RoutingAgent& agent,
                   FlowSpec flow, long* uid_counter);
  void on_data(const Packet& seg);

  long delivered() const { return rcv_next_; }
  const std::vector<long>& delivery_order() const { return delivery_order_; }

 private:
  void send_ack();

  Engine& engine_;
  TraceLog& trace_;
  RoutingAgent& agent_;
  FlowSpec flow_;
  long* uid_counter_;
  long rcv_next_ = 0;
  std::set<long> reorder_buffer_;
  std::vector<long> delivery_order_;
};

constexpr int kAckSize = 40;  // bytes at the agent layer

}  // namespace vanet
