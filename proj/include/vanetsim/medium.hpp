#pragma once

#include <deque>
#include <functional>
#include <vector>

#include "vanetsim/engine.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/packet.hpp"
#include "vanetsim/rng.hpp"
#include "vanetsim/tracelog.hpp"

namespace vanet {

// Shared wireless medium parameters.  Stand-ins for the PHY/MAC stack of a
// full simulator: connectivity is a unit disk, each node owns one half-duplex
// interface that serializes its transmissions at `bitrate` behind a bounded
// FIFO queue, and broadcasts defer by a random jitter in place of CSMA
// contention.
struct LinkParams {
  double range = 250;                 // meters
  double bitrate = 2e6;               // bits/s
  int ifq_capacity = 50;              // packets
  double broadcast_jitter_max = 0.01; // seconds
  double loss_probability = 0;        // optional per-delivery loss, 0 = off

  void validate() const;
};

constexpr NodeId kBroadcast = -1;

class Medium {
 public:
  using DeliverFn = std::function<void(NodeId receiver, const Packet&,
                                       NodeId prev_hop)>;
  using LinkFailFn = std::function<void(NodeId sender, const Packet&,
                                        NodeId next_hop)>;

  Medium(Engine& engine, TraceLog& trace, const MobilityModel& mobility,
         LinkParams params, RngStream* jitter_rng);

  void set_handlers(DeliverFn on_deliver, LinkFailFn on_link_fail);

  const LinkParams& params() const { return params_; }

  SimTime tx_delay(int wire_size) const;

  enum class Enqueue { Accepted, Dropped };

  // FIFO interface queue; a packet arriving at a full queue is dropped with a
  // "D" trace record.  next_hop = kBroadcast broadcasts.
  Enqueue enqueue(NodeId node, const Packet& pkt, NodeId next_hop);

  // Immediate channel transmission at `now`: connectivity is sampled once,
  // deliveries are scheduled after the transmission delay (broadcasts were
  // already jitter-deferred by the queue).  A unicast to an out-of-range next
  // hop notifies the sender's routing agent instead of delivering.  Returns
  // the receiver set.
  std::vector<NodeId> transmit(NodeId sender, const Packet& pkt,
                               NodeId next_hop, SimTime now);

  std::size_t queue_length(NodeId node) const {
    return interfaces_[node].queue.size();
  }

 private:
  struct Frame {
    Packet pkt;
    NodeId next_hop;
  };
  struct Interface {
    bool busy = false;
    std::deque<Frame> queue;
  };

  void try_start(NodeId node);
  void drop(NodeId node, const Packet& pkt);

  Engine& engine_;
  TraceLog& trace_;
  const MobilityModel& mobility_;
  LinkParams params_;
  RngStream* jitter_rng_;
  DeliverFn on_deliver_;
  LinkFailFn on_link_fail_;
  std::vector<Interface> interfaces_;
};

}  // namespace vanet
