#include "vanetsim/metrics.hpp"

#include <map>
#include <utility>

namespace vanet {

MetricsReport compute_metrics(std::span<const TraceRecord> records,
                              PktType data_type) {
  MetricsReport rep;
  struct Times {
    SimTime sent = -1;
    SimTime received = -1;
  };
  std::map<std::pair<FlowKey, long>, Times> packets;

  for (const TraceRecord& r : records) {
    if (r.layer != TraceLayer::Agt || r.type != data_type) continue;
    if (r.event == TraceEvent::Send) {
      ++rep.n_sent;
      Times& t = packets[{r.flow, r.seqno}];
      if (t.sent < 0) t.sent = r.time;
    } else if (r.event == TraceEvent::Recv) {
      ++rep.n_received;
      Times& t = packets[{r.flow, r.seqno}];
      if (t.received < 0) t.received = r.time;
    }
  }
  if (rep.n_sent == 0)
    throw NoTrafficError("no traffic: trace holds no AGT send records of the "
                         "requested type");

  rep.pdr = static_cast<double>(rep.n_received) /
            static_cast<double>(rep.n_sent) * 100.0;
  // same counts, so the complement keeps pdr + lpr == 100 exact
  rep.lpr = 100.0 - rep.pdr;

  SimTime total_us = 0;
  for (const auto& [key, t] : packets) {
    if (t.sent >= 0 && t.received >= 0) {
      total_us += t.received - t.sent;
      ++rep.delay_count;
    }
  }
  rep.avg_e2e_ms = rep.delay_count == 0
                       ? 0.0
                       : static_cast<double>(total_us) /
                             (1000.0 * static_cast<double>(rep.delay_count));
  return rep;
}

MetricsReport compute_metrics_script_compat(
    std::span<const TraceRecord> records, PktType data_type) {
  MetricsReport rep;
  long max_seqno = -1;
  // awk arrays: absent keys read as zero
  std::map<long, double> start_time, end_time;

  for (const TraceRecord& r : records) {
    double t = time_to_seconds(r.time);
    bool agt_send = r.layer == TraceLayer::Agt && r.event == TraceEvent::Send;
    bool agt_recv = r.layer == TraceLayer::Agt && r.event == TraceEvent::Recv;
    if (agt_send) ++rep.n_sent;
    if (agt_recv) ++rep.n_received;
    if (agt_send && max_seqno < r.seqno) max_seqno = r.seqno;

    if (agt_send) {
      start_time[r.seqno] = t;
    } else if (r.type == data_type && r.event == TraceEvent::Recv) {
      end_time[r.seqno] = t;  // any layer: intermediate hops overwrite
    } else if (r.event == TraceEvent::Drop && r.type == data_type) {
      end_time[r.seqno] = -1;
    }
  }
  if (rep.n_sent == 0)
    throw NoTrafficError("no traffic: trace holds no AGT send records");

  rep.pdr = static_cast<double>(rep.n_received) /
            static_cast<double>(rep.n_sent) * 100.0;
  rep.lpr = 100.0 - rep.pdr;

  // The published loop runs X = 1..seqno; data seqnos start at 0 here, so the
  // scan covers 0..seqno to keep single-flow traces in agreement with
  // compute_metrics.  count takes every end_time > 0 entry, the sum only
  // positive delays; the mismatch is the script's.
  long count = 0;
  double sum = 0;
  for (long x = 0; x <= max_seqno; ++x) {
    auto e = end_time.find(x);
    double end = e == end_time.end() ? 0.0 : e->second;
    if (end > 0) {
      auto s = start_time.find(x);
      double start = s == start_time.end() ? 0.0 : s->second;
      double delay = end - start;
      ++count;
      if (delay > 0) sum += delay;
    }
  }
  rep.delay_count = count;
  rep.avg_e2e_ms = count == 0 ? 0.0 : sum / static_cast<double>(count) * 1000.0;
  return rep;
}

}  // namespace vanet
