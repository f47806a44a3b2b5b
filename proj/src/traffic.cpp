#include "vanetsim/traffic.hpp"

#include <algorithm>
#include <cmath>

namespace vanet {

namespace {
constexpr SimTime kMinRto = 1 * kMicrosPerSecond;
constexpr SimTime kMaxRto = 64 * kMicrosPerSecond;
constexpr SimTime kInitialRto = 3 * kMicrosPerSecond;
constexpr int kMaxRetries = 12;
}  // namespace

CbrSource::CbrSource(Engine& engine, TraceLog& trace, RoutingAgent& agent,
                     FlowSpec flow, long* uid_counter)
    : engine_(engine),
      trace_(trace),
      agent_(agent),
      flow_(flow),
      uid_counter_(uid_counter) {}

void CbrSource::start() {
  if (flow_.start_at >= flow_.stop_at) return;
  engine_.schedule(flow_.start_at, [this] { emit(); }, flow_.src);
}

void CbrSource::emit() {
  SimTime now = engine_.now();
  if (now >= flow_.stop_at) return;
  long seq = next_seq_++;
  trace_.record(TraceRecord{TraceEvent::Send, now, flow_.src, TraceLayer::Agt,
                            seq, PktType::Cbr, flow_.cbr_size, flow_.key()});
  Packet p;
  p.uid = (*uid_counter_)++;
  p.flow = flow_.key();
  p.seqno = seq;
  p.kind = PacketKind::Data;
  p.trace_type = PktType::Cbr;
  p.payload_size = flow_.cbr_size;
  agent_.originate(std::move(p));

  SimTime next = flow_.start_at + next_seq_ * flow_.cbr_interval;
  if (next < flow_.stop_at)
    engine_.schedule(next, [this] { emit(); }, flow_.src);
}

void CbrSink::on_data(const Packet& pkt) {
  ++received_;
  trace_.record(TraceRecord{TraceEvent::Recv, engine_.now(), flow_.dst,
                            TraceLayer::Agt, pkt.seqno, PktType::Cbr,
                            pkt.payload_size, pkt.flow});
}

ReliableSender::ReliableSender(Engine& engine, TraceLog& trace,
                               RoutingAgent& agent, FlowSpec flow,
                               long* uid_counter)
    : engine_(engine),
      trace_(trace),
      agent_(agent),
      flow_(flow),
      uid_counter_(uid_counter),
      rto_(kInitialRto) {}

void ReliableSender::start() {
  if (flow_.start_at >= flow_.stop_at) return;
  engine_.schedule(flow_.start_at, [this] { try_send(); }, flow_.src);
}

void ReliableSender::try_send() {
  if (aborted_) return;
  long window = static_cast<long>(cwnd_);
  while (next_seq_ - snd_una_ < window && engine_.now() < flow_.stop_at) {
    send_segment(next_seq_, false);
    ++next_seq_;
  }
  if (!timer_armed_ && snd_una_ < next_seq_) arm_timer();
}

void ReliableSender::send_segment(long seq, bool retransmit) {
  if (!retransmit) {
    trace_.record(TraceRecord{TraceEvent::Send, engine_.now(), flow_.src,
                              TraceLayer::Agt, seq, PktType::Tcp,
                              flow_.tcp_segment, flow_.key()});
    sent_[seq] = {engine_.now(), false};
  } else {
    // the agent layer already announced this seqno once
    trace_.record(TraceRecord{TraceEvent::Send, engine_.now(), flow_.src,
                              TraceLayer::Rtr, seq, PktType::Tcp,
                              flow_.tcp_segment, flow_.key()});
    auto it = sent_.find(seq);
    if (it != sent_.end()) it->second.second = true;
  }
  Packet p;
  p.uid = (*uid_counter_)++;
  p.flow = flow_.key();
  p.seqno = seq;
  p.kind = PacketKind::Data;
  p.trace_type = PktType::Tcp;
  p.payload_size = flow_.tcp_segment;
  agent_.originate(std::move(p));
}

void ReliableSender::arm_timer() {
  if (timer_armed_) engine_.cancel(timer_);
  timer_armed_ = snd_una_ < next_seq_ && !aborted_;
  if (timer_armed_)
    timer_ = engine_.schedule(engine_.now() + rto_, [this] { on_timeout(); },
                              flow_.src);
}

void ReliableSender::on_ack(const Packet& ack) {
  if (aborted_) return;
  long ackno = ack.ackno;
  if (ackno <= snd_una_) {
    ++duplicate_acks_;  // counted, never triggers retransmission
    return;
  }
  if (ackno > next_seq_) ackno = next_seq_;

  // Sample RTT from the newest acked segment sent exactly once (Karn's rule)
  SimTime sample = -1;
  for (auto it = sent_.lower_bound(snd_una_);
       it != sent_.end() && it->first < ackno; ++it)
    if (!it->second.second) sample = engine_.now() - it->second.first;
  if (sample >= 0) {
    double r = time_to_seconds(sample);
    if (!have_rtt_) {
      srtt_ = r;
      rttvar_ = r / 2;
      have_rtt_ = true;
    } else {
      rttvar_ = 0.75 * rttvar_ + 0.25 * std::abs(srtt_ - r);
      srtt_ = 0.875 * srtt_ + 0.125 * r;
    }
    rto_ = std::clamp(time_from_seconds(srtt_ + 4 * rttvar_), kMinRto,
                      kMaxRto);
  }
  sent_.erase(sent_.begin(), sent_.lower_bound(ackno));

  if (cwnd_ < ssthresh_)
    cwnd_ += 1;  // slow start: one segment per ack
  else
    cwnd_ += 1.0 / cwnd_;  // congestion avoidance
  snd_una_ = ackno;
  retries_ = 0;
  arm_timer();
  try_send();
}

void ReliableSender::on_timeout() {
  timer_armed_ = false;
  if (aborted_ || snd_una_ >= next_seq_) return;
  ssthresh_ = std::max(cwnd_ / 2, 2.0);
  cwnd_ = 1;
  rto_ = std::min(rto_ * 2, kMaxRto);
  ++retries_;
  if (retries_ > kMaxRetries) {
    aborted_ = true;
    return;
  }
  send_segment(snd_una_, true);
  arm_timer();
}

ReliableReceiver::ReliableReceiver(Engine& engine, TraceLog& trace,
                                   RoutingAgent& agent, FlowSpec flow,
                                   long* uid_counter)
    : engine_(engine),
      trace_(trace),
      agent_(agent),
      flow_(flow),
      uid_counter_(uid_counter) {}

void ReliableReceiver::on_data(const Packet& seg) {
  if (seg.seqno == rcv_next_) {
    trace_.record(TraceRecord{TraceEvent::Recv, engine_.now(), flow_.dst,
                              TraceLayer::Agt, seg.seqno, PktType::Tcp,
                              seg.payload_size, seg.flow});
    delivery_order_.push_back(rcv_next_);
    ++rcv_next_;
    // a filled gap releases everything contiguous behind it
    while (reorder_buffer_.erase(rcv_next_)) {
      trace_.record(TraceRecord{TraceEvent::Recv, engine_.now(), flow_.dst,
                                TraceLayer::Agt, rcv_next_, PktType::Tcp,
                                seg.payload_size, seg.flow});
      delivery_order_.push_back(rcv_next_);
      ++rcv_next_;
    }
  } else if (seg.seqno > rcv_next_) {
    reorder_buffer_.insert(seg.seqno);
  }
  send_ack();  // every arrival acks, duplicates included
}

void ReliableReceiver::send_ack() {
  Packet p;
  p.uid = (*uid_counter_)++;
  p.flow = flow_.ack_key();
  p.seqno = rcv_next_;
  p.kind = PacketKind::Ack;
  p.trace_type = PktType::Ack;
  p.payload_size = kAckSize;
  p.ackno = rcv_next_;
  agent_.originate(std::move(p));
}

}  // namespace vanet
