#include "vanetsim/medium.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace vanet {

void LinkParams::validate() const {
  if (!(range > 0) || !(bitrate > 0) || ifq_capacity <= 0 ||
      !(broadcast_jitter_max > 0))
    throw std::logic_error("LinkParams: range, bitrate, ifq_capacity and "
                           "broadcast_jitter_max must be strictly positive");
  if (loss_probability < 0 || loss_probability >= 1)
    throw std::logic_error("LinkParams: loss_probability must be in [0, 1)");
}

Medium::Medium(Engine& engine, TraceLog& trace, const MobilityModel& mobility,
               LinkParams params, RngStream* jitter_rng)
    : engine_(engine),
      trace_(trace),
      mobility_(mobility),
      params_(params),
      jitter_rng_(jitter_rng) {
  params_.validate();
  interfaces_.resize(mobility.params().nodes);
}

void Medium::set_handlers(DeliverFn on_deliver, LinkFailFn on_link_fail) {
  on_deliver_ = std::move(on_deliver);
  on_link_fail_ = std::move(on_link_fail);
}

SimTime Medium::tx_delay(int wire_size) const {
  assert(wire_size > 0);
  double sec = static_cast<double>(wire_size) * 8.0 / params_.bitrate;
  SimTime us = static_cast<SimTime>(std::llround(sec * kMicrosPerSecond));
  return us > 0 ? us : 1;  // reception must postdate transmission
}

void Medium::drop(NodeId node, const Packet& pkt) {
  trace_.record(TraceRecord{TraceEvent::Drop, engine_.now(), node,
                            TraceLayer::Mac, pkt.seqno, pkt.trace_type,
                            pkt.wire_size, pkt.flow});
}

Medium::Enqueue Medium::enqueue(NodeId node, const Packet& pkt,
                                NodeId next_hop) {
  Interface& ifq = interfaces_[node];
  if (static_cast<int>(ifq.queue.size()) >= params_.ifq_capacity) {
    drop(node, pkt);
    return Enqueue::Dropped;
  }
  ifq.queue.push_back(Frame{pkt, next_hop});
  try_start(node);
  return Enqueue::Accepted;
}

void Medium::try_start(NodeId node) {
  Interface& ifq = interfaces_[node];
  if (ifq.busy || ifq.queue.empty()) return;
  ifq.busy = true;
  Frame frame = std::move(ifq.queue.front());
  ifq.queue.pop_front();

  // Broadcasts defer by a jitter so flood rebroadcasts desynchronize.
  SimTime jitter = 0;
  if (frame.next_hop == kBroadcast && jitter_rng_)
    jitter = time_from_seconds(
        jitter_rng_->uniform(0.0, params_.broadcast_jitter_max));

  engine_.schedule(engine_.now() + jitter, [this, node, frame] {
    SimTime start = engine_.now();
    transmit(node, frame.pkt, frame.next_hop, start);
    engine_.schedule(start + tx_delay(frame.pkt.wire_size), [this, node] {
      interfaces_[node].busy = false;
      try_start(node);
    });
  });
}

std::vector<NodeId> Medium::transmit(NodeId sender, const Packet& pkt,
                                     NodeId next_hop, SimTime now) {
  assert(pkt.wire_size > 0);
  std::vector<NodeId> receivers;
  if (next_hop == kBroadcast) {
    receivers = mobility_.neighbors(sender, now, params_.range);
  } else {
    Position a = mobility_.position_at(sender, now);
    Position b = mobility_.position_at(next_hop, now);
    if (distance(a, b) <= params_.range) {
      receivers.push_back(next_hop);
    } else {
      if (on_link_fail_) on_link_fail_(sender, pkt, next_hop);
      return receivers;
    }
  }

  SimTime arrive = now + tx_delay(pkt.wire_size);
  for (NodeId rx : receivers) {
    if (params_.loss_probability > 0 && jitter_rng_ &&
        jitter_rng_->uniform01() < params_.loss_probability) {
      drop(rx, pkt);
      continue;
    }
    engine_.schedule(arrive, [this, rx, pkt, sender] {
      if (on_deliver_) on_deliver_(rx, pkt, sender);
    });
  }
  return receivers;
}

}  // namespace vanet
