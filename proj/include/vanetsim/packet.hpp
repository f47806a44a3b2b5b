#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace vanet {

using NodeId = int;

enum class PacketKind { Data, Ack, Rreq, Rrep, Rerr };

// Trace-file packet type tokens ($7 in the analysis scripts).
enum class PktType { Cbr, Tcp, Ack, Rreq, Rrep, Rerr };

struct FlowKey {
  NodeId src = 0;
  NodeId dst = 0;
  int sport = 0;
  int dport = 0;
  auto operator<=>(const FlowKey&) const = default;
};

// AODV route request: flooded with a per-originator request id; receivers
// suppress duplicates of (originator, request_id).
struct AodvRreqInfo {
  NodeId originator = 0;
  std::uint32_t origin_seqno = 0;
  std::uint32_t request_id = 0;
  NodeId target = 0;
  std::uint32_t dest_seqno = 0;
  bool dest_seqno_known = false;
  int hop_count = 0;
};

struct AodvRrepInfo {
  NodeId dest = 0;
  std::uint32_t dest_seqno = 0;
  int hop_count = 0;
  NodeId originator = 0;
};

struct AodvRerrInfo {
  std::vector<std::pair<NodeId, std::uint32_t>> unreachable;
};

// DSR route error names the broken directed link.
struct DsrRerrInfo {
  NodeId from = 0;
  NodeId to = 0;
};

// DSR flood identity; receivers suppress duplicates of
// (originator, request_id) and any record already containing them.
struct DsrRreqInfo {
  NodeId originator = 0;
  std::uint32_t request_id = 0;
  NodeId target = 0;
};

struct Packet {
  long uid = 0;            // unique within one simulation
  FlowKey flow;
  long seqno = 0;          // per-flow for data/ack, uid for control packets
  PacketKind kind = PacketKind::Data;
  PktType trace_type = PktType::Cbr;
  int payload_size = 0;    // size at the agent layer
  int wire_size = 0;       // size on the medium, includes routing headers
  int ttl = 0;

  // DSR: complete node list carried by data/rrep/rerr packets.
  std::vector<NodeId> source_route;
  // DSR: accumulating route record carried by a flooded rreq.
  std::vector<NodeId> rreq_record;
  // DSR: discovered route carried back by a rrep.
  std::vector<NodeId> found_route;

  std::optional<AodvRreqInfo> aodv_rreq;
  std::optional<AodvRrepInfo> aodv_rrep;
  std::optional<AodvRerrInfo> aodv_rerr;
  std::optional<DsrRreqInfo> dsr_rreq;
  std::optional<DsrRerrInfo> dsr_rerr;

  long ackno = -1;         // cumulative ack carried by Ack packets
};

}  // namespace vanet
