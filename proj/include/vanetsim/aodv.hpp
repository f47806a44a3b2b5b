#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vanetsim/routing.hpp"

namespace vanet {

// One entry per destination.  dest_seqno never decreases across updates; an
// expired or invalid entry is never used to forward.
struct AodvRouteEntry {
  NodeId next_hop = -1;
  int hop_count = 0;
  std::uint32_t dest_seqno = 0;
  SimTime expires_at = 0;
  bool valid = false;
};

struct AodvParams {
  double active_route_timeout = 10;  // seconds, refreshed on use
  int rreq_retries = 3;              // floods beyond the first
  double rreq_retry_base = 1;        // seconds; timeout doubles per flood
  int buffer_capacity = 64;          // packets awaiting a route, per node
  int rreq_ttl = 30;
  int data_ttl = 30;
};

// On-demand distance-vector agent: RREQ/RREP discovery with destination
// sequence numbers, hop-by-hop forwarding on a per-destination table, RERR
// flooding (ttl 1, re-propagated by nodes that lose routes).  Link failure
// comes from the medium's unicast-out-of-range notification; there are no
// hello beacons.
class AodvAgent : public RoutingAgent {
 public:
  explicit AodvAgent(AgentContext ctx, AodvParams params = {});

  void originate(Packet pkt) override;
  void receive(Packet pkt, NodeId from) override;
  void on_link_break(const Packet& pkt, NodeId next_hop) override;

  const std::map<NodeId, AodvRouteEntry>& routes() const { return routes_; }
  std::uint32_t own_seqno() const { return own_seqno_; }
  std::size_t buffered() const { return buffer_.size(); }

 private:
  struct Discovery {
    int attempts = 0;  // floods sent so far beyond the first
    Engine::Handle timer = 0;
  };

  // Valid, unexpired entry or nullptr.
  AodvRouteEntry* lookup(NodeId dest);
  void refresh(AodvRouteEntry& e);
  // Applies the newer-seqno / equal-seqno-shorter-path rule; on success also
  // completes any pending discovery for dest.
  void update_route(NodeId dest, NodeId next_hop, int hop_count,
                    std::uint32_t seqno);

  void handle_data(Packet pkt);
  void handle_rreq(Packet pkt, NodeId from);
  void handle_rrep(Packet pkt, NodeId from);
  void handle_rerr(const Packet& pkt, NodeId from);

  void buffer_and_discover(Packet pkt);
  void send_rreq(NodeId dst);
  void arm_discovery_timer(NodeId dst);
  void on_discovery_timeout(NodeId dst);
  void finish_discovery(NodeId dest);
  void flush_buffered(NodeId dest);
  void drop_buffered(NodeId dest);

  void send_rrep(NodeId dest, std::uint32_t dest_seqno, int hop_count,
                 NodeId originator, NodeId to_next);
  void send_rerr(const std::vector<std::pair<NodeId, std::uint32_t>>& lost,
                 bool propagated);

  AodvParams params_;
  std::map<NodeId, AodvRouteEntry> routes_;
  std::uint32_t own_seqno_ = 0;
  std::uint32_t next_request_id_ = 0;
  std::set<std::pair<NodeId, std::uint32_t>> seen_rreqs_;
  std::deque<Packet> buffer_;
  std::map<NodeId, Discovery> discoveries_;
};

}  // namespace vanet
