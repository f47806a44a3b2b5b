#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "vanetsim/routing.hpp"

namespace vanet {

struct DsrParams {
  bool cache_replies = true;  // intermediates may answer from cache
  int rreq_retries = 3;       // floods beyond the first
  double rreq_retry_base = 1; // seconds; timeout doubles per flood
  int buffer_capacity = 64;   // packets awaiting a route, per node
  int rreq_ttl = 30;
};

// Source-routing agent: discovery floods accumulate the traversed node
// record, data carries the complete route, and the cache keeps every learned
// path (multiple routes per destination).  Paths persist until a route error
// purges the broken directed link.
class DsrAgent : public RoutingAgent {
 public:
  struct CachePath {
    std::vector<NodeId> hops;  // starts at this node, no repeats
    SimTime learned_at = 0;
  };

  explicit DsrAgent(AgentContext ctx, DsrParams params = {});

  void originate(Packet pkt) override;
  void receive(Packet pkt, NodeId from) override;
  void on_link_break(const Packet& pkt, NodeId next_hop) override;

  // Shortest cached path from this node to dst (ties: most recently
  // learned); empty when the cache has none.
  std::vector<NodeId> route_to(NodeId dst) const;
  const std::vector<CachePath>& cache() const { return cache_; }
  std::size_t buffered() const { return buffer_.size(); }

 private:
  struct Discovery {
    int attempts = 0;
    Engine::Handle timer = 0;
  };

  void add_path(std::vector<NodeId> path);
  // Caches the suffix from this node onward and the reversed prefix back to
  // the route's first node (links are bidirectional here).
  void learn_from_route(const std::vector<NodeId>& route);
  void purge_link(NodeId from, NodeId to);

  void handle_data(Packet pkt);
  void handle_rreq(Packet pkt);
  void handle_rrep(Packet pkt);
  void handle_rerr(Packet pkt);
  void forward_along_route(Packet pkt);
  void send_with_route(Packet pkt, const std::vector<NodeId>& route);

  void buffer_and_discover(Packet pkt);
  void send_rreq(NodeId dst);
  void arm_discovery_timer(NodeId dst);
  void on_discovery_timeout(NodeId dst);
  void resolve_pending();
  void flush_buffered(NodeId dest);
  void drop_buffered(NodeId dest);

  void send_rrep(std::vector<NodeId> found, std::vector<NodeId> route_back);

  DsrParams params_;
  std::vector<CachePath> cache_;
  std::uint32_t next_request_id_ = 0;
  std::set<std::pair<NodeId, std::uint32_t>> seen_rreqs_;
  std::deque<Packet> buffer_;
  std::map<NodeId, Discovery> discoveries_;
};

}  // namespace vanet
