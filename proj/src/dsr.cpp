#include "vanetsim/dsr.hpp"

#include <algorithm>
#include <cassert>

namespace vanet {

namespace {
constexpr int kDataHeader = 20;  // + 4 bytes per node id in the carried route
constexpr int kControlBase = 32;
constexpr int kRoutingPort = 255;

bool contains(const std::vector<NodeId>& v, NodeId n) {
  return std::find(v.begin(), v.end(), n) != v.end();
}

bool duplicate_free(const std::vector<NodeId>& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j)
      if (v[i] == v[j]) return false;
  return true;
}

int data_wire_size(int payload, const std::vector<NodeId>& route) {
  return payload + kDataHeader + 4 * static_cast<int>(route.size());
}

int control_wire_size(const Packet& p) {
  return kControlBase +
         4 * static_cast<int>(p.source_route.size() + p.rreq_record.size() +
                              p.found_route.size());
}
}  // namespace

DsrAgent::DsrAgent(AgentContext ctx, DsrParams params)
    : RoutingAgent(std::move(ctx)), params_(params) {}

std::vector<NodeId> DsrAgent::route_to(NodeId dst) const {
  const CachePath* best = nullptr;
  std::size_t best_len = 0;
  for (const CachePath& p : cache_) {
    auto it = std::find(p.hops.begin(), p.hops.end(), dst);
    if (it == p.hops.end()) continue;
    std::size_t len = static_cast<std::size_t>(it - p.hops.begin()) + 1;
    if (!best || len < best_len ||
        (len == best_len && p.learned_at >= best->learned_at)) {
      best = &p;
      best_len = len;
    }
  }
  if (!best) return {};
  auto it = std::find(best->hops.begin(), best->hops.end(), dst);
  return {best->hops.begin(), it + 1};
}

void DsrAgent::add_path(std::vector<NodeId> path) {
  if (path.size() < 2) return;
  assert(path.front() == self());
  assert(duplicate_free(path));
  for (CachePath& p : cache_) {
    if (p.hops == path) {
      p.learned_at = now();  // exact duplicate: just refresh
      resolve_pending();
      return;
    }
  }
  cache_.push_back(CachePath{std::move(path), now()});
  resolve_pending();
}

void DsrAgent::learn_from_route(const std::vector<NodeId>& route) {
  auto it = std::find(route.begin(), route.end(), self());
  if (it == route.end()) return;
  if (it + 1 != route.end()) add_path({it, route.end()});
  if (it != route.begin())
    add_path({std::make_reverse_iterator(it + 1), route.rend()});
}

void DsrAgent::purge_link(NodeId from, NodeId to) {
  std::erase_if(cache_, [&](const CachePath& p) {
    for (std::size_t i = 0; i + 1 < p.hops.size(); ++i)
      if (p.hops[i] == from && p.hops[i + 1] == to) return true;
    return false;
  });
}

void DsrAgent::originate(Packet pkt) {
  if (pkt.flow.dst == self()) {
    hand_up(pkt);
    return;
  }
  std::vector<NodeId> route = route_to(pkt.flow.dst);
  if (!route.empty())
    send_with_route(std::move(pkt), route);
  else
    buffer_and_discover(std::move(pkt));
}

void DsrAgent::send_with_route(Packet pkt, const std::vector<NodeId>& route) {
  pkt.source_route = route;
  pkt.wire_size = data_wire_size(pkt.payload_size, route);
  pkt.ttl = static_cast<int>(route.size());
  ctx_.medium->enqueue(self(), pkt, route[1]);
}

void DsrAgent::receive(Packet pkt, NodeId from) {
  (void)from;  // the carried record/route identifies the path
  log(TraceEvent::Recv, pkt, pkt.wire_size);
  switch (pkt.kind) {
    case PacketKind::Data:
    case PacketKind::Ack:
      handle_data(std::move(pkt));
      break;
    case PacketKind::Rreq:
      handle_rreq(std::move(pkt));
      break;
    case PacketKind::Rrep:
      handle_rrep(std::move(pkt));
      break;
    case PacketKind::Rerr:
      handle_rerr(std::move(pkt));
      break;
  }
}

void DsrAgent::handle_data(Packet pkt) {
  learn_from_route(pkt.source_route);
  if (!pkt.source_route.empty() && pkt.source_route.back() == self()) {
    hand_up(pkt);
    return;
  }
  forward_along_route(std::move(pkt));
}

void DsrAgent::forward_along_route(Packet pkt) {
  auto it =
      std::find(pkt.source_route.begin(), pkt.source_route.end(), self());
  if (it == pkt.source_route.end() || it + 1 == pkt.source_route.end()) {
    drop(pkt);  // mis-routed: we are not an interior hop of this route
    return;
  }
  NodeId next = *(it + 1);
  log(TraceEvent::Forward, pkt, pkt.wire_size);
  ctx_.medium->enqueue(self(), pkt, next);
}

void DsrAgent::handle_rreq(Packet pkt) {
  const DsrRreqInfo& info = *pkt.dsr_rreq;
  if (info.originator == self()) return;
  if (contains(pkt.rreq_record, self())) return;  // loop suppression
  if (!seen_rreqs_.insert({info.originator, info.request_id}).second) return;

  // the record so far, reversed, is a path from here back to the originator
  std::vector<NodeId> back;
  back.reserve(pkt.rreq_record.size() + 1);
  back.push_back(self());
  back.insert(back.end(), pkt.rreq_record.rbegin(), pkt.rreq_record.rend());
  add_path(back);

  if (info.target == self()) {
    std::vector<NodeId> full = pkt.rreq_record;
    full.push_back(self());
    send_rrep(std::move(full), std::move(back));
    return;
  }
  if (params_.cache_replies) {
    std::vector<NodeId> suffix = route_to(info.target);
    if (!suffix.empty()) {
      std::vector<NodeId> full = pkt.rreq_record;
      full.insert(full.end(), suffix.begin(), suffix.end());
      if (duplicate_free(full)) {
        send_rrep(std::move(full), std::move(back));
        return;
      }
      // concatenation revisits a node: no usable answer, keep flooding
    }
  }
  if (pkt.ttl <= 1) return;
  --pkt.ttl;
  pkt.rreq_record.push_back(self());
  pkt.wire_size = control_wire_size(pkt);
  log(TraceEvent::Forward, pkt, pkt.wire_size);
  ctx_.medium->enqueue(self(), pkt, kBroadcast);
}

void DsrAgent::send_rrep(std::vector<NodeId> found,
                         std::vector<NodeId> route_back) {
  assert(route_back.size() >= 2);
  Packet p;
  p.uid = p.seqno = new_uid();
  p.kind = PacketKind::Rrep;
  p.trace_type = PktType::Rrep;
  p.flow = {self(), route_back.back(), kRoutingPort, kRoutingPort};
  p.found_route = std::move(found);
  p.source_route = std::move(route_back);
  p.wire_size = p.payload_size = control_wire_size(p);
  p.ttl = static_cast<int>(p.source_route.size());
  NodeId next = p.source_route[1];
  log(TraceEvent::Send, p, p.wire_size);
  ctx_.medium->enqueue(self(), p, next);
}

void DsrAgent::handle_rrep(Packet pkt) {
  if (!pkt.source_route.empty() && pkt.source_route.back() == self()) {
    // our discovery completed; found_route starts at this node
    if (!pkt.found_route.empty() && pkt.found_route.front() == self())
      add_path(pkt.found_route);
    return;
  }
  learn_from_route(pkt.found_route);
  forward_along_route(std::move(pkt));
}

void DsrAgent::on_link_break(const Packet& pkt, NodeId next_hop) {
  purge_link(self(), next_hop);
  drop(pkt);
  if (pkt.kind == PacketKind::Rerr) return;  // a report about a report helps no one
  const std::vector<NodeId>& route = pkt.source_route;
  auto it = std::find(route.begin(), route.end(), self());
  if (it == route.end() || it == route.begin())
    return;  // we are the source: the purge already forces re-discovery

  std::vector<NodeId> back(std::make_reverse_iterator(it + 1), route.rend());
  Packet err;
  err.uid = err.seqno = new_uid();
  err.kind = PacketKind::Rerr;
  err.trace_type = PktType::Rerr;
  err.flow = {self(), route.front(), kRoutingPort, kRoutingPort};
  err.dsr_rerr = DsrRerrInfo{self(), next_hop};
  err.source_route = std::move(back);
  err.wire_size = err.payload_size = control_wire_size(err) + 8;
  err.ttl = static_cast<int>(err.source_route.size());
  NodeId next = err.source_route[1];
  log(TraceEvent::Send, err, err.wire_size);
  ctx_.medium->enqueue(self(), err, next);
}

void DsrAgent::handle_rerr(Packet pkt) {
  purge_link(pkt.dsr_rerr->from, pkt.dsr_rerr->to);
  if (!pkt.source_route.empty() && pkt.source_route.back() == self()) return;
  forward_along_route(std::move(pkt));
}

void DsrAgent::buffer_and_discover(Packet pkt) {
  NodeId dst = pkt.flow.dst;
  if (static_cast<int>(buffer_.size()) >= params_.buffer_capacity) {
    Packet& oldest = buffer_.front();
    oldest.wire_size = data_wire_size(oldest.payload_size, {});
    drop(oldest);
    buffer_.pop_front();
  }
  buffer_.push_back(std::move(pkt));
  if (!discoveries_.count(dst)) {
    discoveries_[dst];
    send_rreq(dst);
    arm_discovery_timer(dst);
  }
}

void DsrAgent::send_rreq(NodeId dst) {
  std::uint32_t rid = next_request_id_++;
  seen_rreqs_.insert({self(), rid});

  Packet p;
  p.uid = p.seqno = new_uid();
  p.kind = PacketKind::Rreq;
  p.trace_type = PktType::Rreq;
  p.flow = {self(), dst, kRoutingPort, kRoutingPort};
  p.ttl = params_.rreq_ttl;
  p.rreq_record = {self()};
  p.dsr_rreq = DsrRreqInfo{self(), rid, dst};
  p.wire_size = p.payload_size = control_wire_size(p);
  log(TraceEvent::Send, p, p.wire_size);
  ctx_.medium->enqueue(self(), p, kBroadcast);
}

void DsrAgent::arm_discovery_timer(NodeId dst) {
  Discovery& d = discoveries_.at(dst);
  SimTime wait = time_from_seconds(params_.rreq_retry_base *
                                   static_cast<double>(1 << d.attempts));
  d.timer = ctx_.engine->schedule(
      now() + wait, [this, dst] { on_discovery_timeout(dst); }, self());
}

void DsrAgent::on_discovery_timeout(NodeId dst) {
  auto it = discoveries_.find(dst);
  if (it == discoveries_.end()) return;
  Discovery& d = it->second;
  if (d.attempts >= params_.rreq_retries) {
    discoveries_.erase(it);
    drop_buffered(dst);
    return;
  }
  ++d.attempts;
  send_rreq(dst);
  arm_discovery_timer(dst);
}

void DsrAgent::resolve_pending() {
  for (auto it = discoveries_.begin(); it != discoveries_.end();) {
    NodeId dst = it->first;
    if (route_to(dst).empty()) {
      ++it;
      continue;
    }
    ctx_.engine->cancel(it->second.timer);
    it = discoveries_.erase(it);
    flush_buffered(dst);
  }
}

void DsrAgent::flush_buffered(NodeId dest) {
  std::deque<Packet> keep;
  std::vector<Packet> out;
  for (Packet& p : buffer_) {
    if (p.flow.dst == dest)
      out.push_back(std::move(p));
    else
      keep.push_back(std::move(p));
  }
  buffer_.swap(keep);
  for (Packet& p : out) {
    std::vector<NodeId> route = route_to(dest);
    if (route.empty()) {
      p.wire_size = data_wire_size(p.payload_size, {});
      drop(p);
      continue;
    }
    send_with_route(std::move(p), route);
  }
}

void DsrAgent::drop_buffered(NodeId dest) {
  std::deque<Packet> keep;
  for (Packet& p : buffer_) {
    if (p.flow.dst == dest) {
      p.wire_size = data_wire_size(p.payload_size, {});
      drop(p);
    } else {
      keep.push_back(std::move(p));
    }
  }
  buffer_.swap(keep);
}

}  // namespace vanet
