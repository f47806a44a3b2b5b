#pragma once

#include <functional>
#include <utility>

#include "vanetsim/engine.hpp"
#include "vanetsim/medium.hpp"
#include "vanetsim/packet.hpp"
#include "vanetsim/tracelog.hpp"

namespace vanet {

// Hooks a per-node routing agent into the surrounding simulation.
// deliver_up hands data/ack packets that terminate here to the local
// transport layer; uid_counter is the simulation-wide packet id source.
struct AgentContext {
  NodeId self = 0;
  Engine* engine = nullptr;
  Medium* medium = nullptr;
  TraceLog* trace = nullptr;
  std::function<void(const Packet&)> deliver_up;
  long* uid_counter = nullptr;
};

// One routing agent per node, driven solely by the simulation thread.
class RoutingAgent {
 public:
  explicit RoutingAgent(AgentContext ctx) : ctx_(std::move(ctx)) {}
  virtual ~RoutingAgent() = default;

  RoutingAgent(const RoutingAgent&) = delete;
  RoutingAgent& operator=(const RoutingAgent&) = delete;

  NodeId self() const { return ctx_.self; }

  // Data or ack packet handed down by the local agent layer.  The agent owns
  // header accounting (wire_size) and route selection from here on.
  virtual void originate(Packet pkt) = 0;

  // Packet arriving from the medium; `from` is the transmitting node.
  virtual void receive(Packet pkt, NodeId from) = 0;

  // A unicast transmission from this node toward next_hop failed because the
  // hop was out of range at transmit time.
  virtual void on_link_break(const Packet& pkt, NodeId next_hop) = 0;

 protected:
  SimTime now() const { return ctx_.engine->now(); }
  long new_uid() { return (*ctx_.uid_counter)++; }

  void log(TraceEvent ev, const Packet& pkt, int size) {
    ctx_.trace->record(TraceRecord{ev, now(), ctx_.self, TraceLayer::Rtr,
                                   pkt.seqno, pkt.trace_type, size, pkt.flow});
  }
  void drop(const Packet& pkt) { log(TraceEvent::Drop, pkt, pkt.wire_size); }
  void hand_up(const Packet& pkt) {
    if (ctx_.deliver_up) ctx_.deliver_up(pkt);
  }

  AgentContext ctx_;
};

}  // namespace vanet
