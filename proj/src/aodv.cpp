#include "vanetsim/aodv.hpp"

#include <algorithm>

namespace vanet {

namespace {
constexpr int kDataHeader = 20;  // bytes added to every routed payload
constexpr int kRreqSize = 48;
constexpr int kRrepSize = 44;
constexpr int kRerrBase = 32;    // + 8 per unreachable destination
constexpr int kRoutingPort = 255;
}  // namespace

AodvAgent::AodvAgent(AgentContext ctx, AodvParams params)
    : RoutingAgent(std::move(ctx)), params_(params) {}

AodvRouteEntry* AodvAgent::lookup(NodeId dest) {
  auto it = routes_.find(dest);
  if (it == routes_.end()) return nullptr;
  AodvRouteEntry& e = it->second;
  if (!e.valid || e.expires_at <= now()) return nullptr;
  return &e;
}

void AodvAgent::refresh(AodvRouteEntry& e) {
  e.expires_at = now() + time_from_seconds(params_.active_route_timeout);
}

void AodvAgent::update_route(NodeId dest, NodeId next_hop, int hop_count,
                             std::uint32_t seqno) {
  auto [it, inserted] = routes_.try_emplace(dest);
  AodvRouteEntry& e = it->second;
  if (!inserted) {
    if (e.valid && e.expires_at <= now()) e.valid = false;
    bool better = e.valid ? seqno > e.dest_seqno ||
                                (seqno == e.dest_seqno &&
                                 hop_count < e.hop_count)
                          : seqno >= e.dest_seqno;
    if (!better && e.valid && seqno == e.dest_seqno &&
        hop_count == e.hop_count && e.next_hop == next_hop) {
      refresh(e);  // same route advertised again: keep it alive
      return;
    }
    if (!better) return;
  }
  e.next_hop = next_hop;
  e.hop_count = hop_count;
  e.dest_seqno = std::max(e.dest_seqno, seqno);
  e.valid = true;
  refresh(e);
  finish_discovery(dest);
}

void AodvAgent::originate(Packet pkt) {
  if (pkt.flow.dst == self()) {
    hand_up(pkt);
    return;
  }
  pkt.wire_size = pkt.payload_size + kDataHeader;
  pkt.ttl = params_.data_ttl;
  if (AodvRouteEntry* e = lookup(pkt.flow.dst)) {
    refresh(*e);
    ctx_.medium->enqueue(self(), pkt, e->next_hop);
  } else {
    buffer_and_discover(std::move(pkt));
  }
}

void AodvAgent::receive(Packet pkt, NodeId from) {
  log(TraceEvent::Recv, pkt, pkt.wire_size);
  switch (pkt.kind) {
    case PacketKind::Data:
    case PacketKind::Ack:
      handle_data(std::move(pkt));
      break;
    case PacketKind::Rreq:
      handle_rreq(std::move(pkt), from);
      break;
    case PacketKind::Rrep:
      handle_rrep(std::move(pkt), from);
      break;
    case PacketKind::Rerr:
      handle_rerr(pkt, from);
      break;
  }
}

void AodvAgent::handle_data(Packet pkt) {
  if (pkt.flow.dst == self()) {
    hand_up(pkt);
    return;
  }
  AodvRouteEntry* e = lookup(pkt.flow.dst);
  if (!e) {
    // can't forward: report the hole so upstream stops using us
    drop(pkt);
    auto it = routes_.find(pkt.flow.dst);
    std::uint32_t seq = it == routes_.end() ? 0 : it->second.dest_seqno;
    send_rerr({{pkt.flow.dst, seq}}, false);
    return;
  }
  if (pkt.ttl <= 1) {
    drop(pkt);
    return;
  }
  --pkt.ttl;
  refresh(*e);
  log(TraceEvent::Forward, pkt, pkt.wire_size);
  ctx_.medium->enqueue(self(), pkt, e->next_hop);
}

void AodvAgent::handle_rreq(Packet pkt, NodeId from) {
  AodvRreqInfo& info = *pkt.aodv_rreq;
  if (info.originator == self()) return;  // own flood echoed back
  if (!seen_rreqs_.insert({info.originator, info.request_id}).second)
    return;  // duplicate flood copy, dropped silently

  update_route(info.originator, from, info.hop_count + 1, info.origin_seqno);

  if (info.target == self()) {
    own_seqno_ = std::max(own_seqno_ + 1,
                          info.dest_seqno_known ? info.dest_seqno : 0);
    send_rrep(self(), own_seqno_, 0, info.originator, from);
    return;
  }
  AodvRouteEntry* e = lookup(info.target);
  if (e && (!info.dest_seqno_known || e->dest_seqno >= info.dest_seqno)) {
    // fresh-enough cached route: answer on the destination's behalf
    send_rrep(info.target, e->dest_seqno, e->hop_count, info.originator, from);
    return;
  }
  if (pkt.ttl <= 1) return;
  --pkt.ttl;
  ++pkt.aodv_rreq->hop_count;
  log(TraceEvent::Forward, pkt, pkt.wire_size);
  ctx_.medium->enqueue(self(), pkt, kBroadcast);
}

void AodvAgent::handle_rrep(Packet pkt, NodeId from) {
  AodvRrepInfo& info = *pkt.aodv_rrep;
  update_route(info.dest, from, info.hop_count + 1, info.dest_seqno);
  if (info.originator == self()) return;

  AodvRouteEntry* rev = lookup(info.originator);
  if (!rev || pkt.ttl <= 1) {
    drop(pkt);
    return;
  }
  refresh(*rev);
  --pkt.ttl;
  ++pkt.aodv_rrep->hop_count;
  log(TraceEvent::Forward, pkt, pkt.wire_size);
  ctx_.medium->enqueue(self(), pkt, rev->next_hop);
}

void AodvAgent::on_link_break(const Packet& pkt, NodeId next_hop) {
  std::vector<std::pair<NodeId, std::uint32_t>> lost;
  for (auto& [dest, e] : routes_) {
    if (e.valid && e.next_hop == next_hop) {
      e.valid = false;
      ++e.dest_seqno;
      lost.push_back({dest, e.dest_seqno});
    }
  }
  drop(pkt);
  if (!lost.empty()) send_rerr(lost, false);
}

void AodvAgent::handle_rerr(const Packet& pkt, NodeId from) {
  std::vector<std::pair<NodeId, std::uint32_t>> lost;
  for (const auto& [dest, seq] : pkt.aodv_rerr->unreachable) {
    auto it = routes_.find(dest);
    if (it == routes_.end()) continue;
    AodvRouteEntry& e = it->second;
    if (!e.valid || e.next_hop != from) continue;  // not routed via reporter
    e.valid = false;
    e.dest_seqno = std::max(e.dest_seqno, seq);
    lost.push_back({dest, e.dest_seqno});
  }
  if (!lost.empty()) send_rerr(lost, true);
}

void AodvAgent::buffer_and_discover(Packet pkt) {
  NodeId dst = pkt.flow.dst;
  if (static_cast<int>(buffer_.size()) >= params_.buffer_capacity) {
    drop(buffer_.front());
    buffer_.pop_front();
  }
  buffer_.push_back(std::move(pkt));
  if (!discoveries_.count(dst)) {
    discoveries_[dst];  // attempts = 0
    send_rreq(dst);
    arm_discovery_timer(dst);
  }
}

void AodvAgent::send_rreq(NodeId dst) {
  ++own_seqno_;
  std::uint32_t rid = next_request_id_++;
  seen_rreqs_.insert({self(), rid});

  Packet p;
  p.uid = p.seqno = new_uid();
  p.kind = PacketKind::Rreq;
  p.trace_type = PktType::Rreq;
  p.flow = {self(), dst, kRoutingPort, kRoutingPort};
  p.payload_size = p.wire_size = kRreqSize;
  p.ttl = params_.rreq_ttl;
  auto it = routes_.find(dst);
  bool known = it != routes_.end();
  p.aodv_rreq = AodvRreqInfo{self(), own_seqno_, rid, dst,
                             known ? it->second.dest_seqno : 0, known, 0};
  log(TraceEvent::Send, p, p.wire_size);
  ctx_.medium->enqueue(self(), p, kBroadcast);
}

void AodvAgent::arm_discovery_timer(NodeId dst) {
  Discovery& d = discoveries_.at(dst);
  SimTime wait = time_from_seconds(params_.rreq_retry_base *
                                   static_cast<double>(1 << d.attempts));
  d.timer = ctx_.engine->schedule(
      now() + wait, [this, dst] { on_discovery_timeout(dst); }, self());
}

void AodvAgent::on_discovery_timeout(NodeId dst) {
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

void AodvAgent::finish_discovery(NodeId dest) {
  auto it = discoveries_.find(dest);
  if (it == discoveries_.end()) return;
  ctx_.engine->cancel(it->second.timer);
  discoveries_.erase(it);
  flush_buffered(dest);
}

void AodvAgent::flush_buffered(NodeId dest) {
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
    AodvRouteEntry* e = lookup(dest);
    if (!e) {  // expired in the same instant; treat like a missing route
      drop(p);
      continue;
    }
    refresh(*e);
    ctx_.medium->enqueue(self(), p, e->next_hop);
  }
}

void AodvAgent::drop_buffered(NodeId dest) {
  std::deque<Packet> keep;
  for (Packet& p : buffer_) {
    if (p.flow.dst == dest)
      drop(p);
    else
      keep.push_back(std::move(p));
  }
  buffer_.swap(keep);
}

void AodvAgent::send_rrep(NodeId dest, std::uint32_t dest_seqno, int hop_count,
                          NodeId originator, NodeId to_next) {
  Packet p;
  p.uid = p.seqno = new_uid();
  p.kind = PacketKind::Rrep;
  p.trace_type = PktType::Rrep;
  p.flow = {self(), originator, kRoutingPort, kRoutingPort};
  p.payload_size = p.wire_size = kRrepSize;
  p.ttl = params_.rreq_ttl;
  p.aodv_rrep = AodvRrepInfo{dest, dest_seqno, hop_count, originator};
  log(TraceEvent::Send, p, p.wire_size);
  ctx_.medium->enqueue(self(), p, to_next);
}

void AodvAgent::send_rerr(
    const std::vector<std::pair<NodeId, std::uint32_t>>& lost,
    bool propagated) {
  (void)propagated;  // propagated reports are fresh packets as well
  Packet p;
  p.uid = p.seqno = new_uid();
  p.kind = PacketKind::Rerr;
  p.trace_type = PktType::Rerr;
  p.flow = {self(), self(), kRoutingPort, kRoutingPort};
  p.payload_size = p.wire_size =
      kRerrBase + 8 * static_cast<int>(lost.size());
  p.ttl = 1;  // one hop; receivers re-issue if they lose routes themselves
  p.aodv_rerr = AodvRerrInfo{lost};
  log(TraceEvent::Send, p, p.wire_size);
  ctx_.medium->enqueue(self(), p, kBroadcast);
}

}  // namespace vanet
