#include "vanetsim/simulation.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <vector>

#include "vanetsim/aodv.hpp"
#include "vanetsim/dsr.hpp"
#include "vanetsim/engine.hpp"
#include "vanetsim/medium.hpp"
#include "vanetsim/mobility.hpp"
#include "vanetsim/traffic.hpp"

namespace vanet {

namespace {

MobilityParams mobility_params(const ScenarioConfig& cfg) {
  MobilityParams mp;
  mp.nodes = cfg.nodes;
  mp.width = cfg.area_width;
  mp.height = cfg.area_height;
  mp.v_min = cfg.v_min;
  mp.v_max = cfg.v_max;
  mp.pause = cfg.pause;
  mp.horizon = time_from_seconds(cfg.sim_time);
  return mp;
}

// Distinct ordered (src, dst) pairs, capped by what n nodes can offer.
std::vector<std::pair<NodeId, NodeId>> pick_pairs(int nodes, int connections,
                                                  RngStream& rng) {
  long long limit = static_cast<long long>(nodes) * (nodes - 1);
  int want = static_cast<int>(
      std::min<long long>(connections, limit));
  std::set<std::pair<NodeId, NodeId>> seen;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  while (static_cast<int>(pairs.size()) < want) {
    NodeId src = static_cast<NodeId>(rng.uniform_int(0, nodes - 1));
    NodeId dst = static_cast<NodeId>(rng.uniform_int(0, nodes - 2));
    if (dst >= src) ++dst;
    if (seen.insert({src, dst}).second) pairs.push_back({src, dst});
  }
  return pairs;
}

}  // namespace

std::string motion_schedule_text(const ScenarioConfig& cfg) {
  cfg.validate();
  MobilityModel mobility = MobilityModel::generate(cfg.seed,
                                                   mobility_params(cfg));
  std::ostringstream out;
  mobility.export_schedule(out);
  return out.str();
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunOutputs& out) {
  cfg.validate();

  Engine engine;
  MobilityModel mobility =
      MobilityModel::generate(cfg.seed, mobility_params(cfg));

  if (!out.schedule_path.empty()) {
    std::ofstream f(out.schedule_path);
    if (!f)
      throw std::runtime_error("cannot write schedule file: " +
                               out.schedule_path);
    mobility.export_schedule(f);
  }

  TraceLog trace(out.agt_and_drops_only);
  std::ofstream trace_file;
  if (!out.trace_path.empty()) {
    trace_file.open(out.trace_path);
    if (!trace_file)
      throw std::runtime_error("cannot write trace file: " + out.trace_path);
    trace.attach(&trace_file);
  }

  RngStream jitter(cfg.seed, "jitter");
  LinkParams lp;
  lp.range = cfg.range;
  lp.bitrate = cfg.bitrate;
  lp.ifq_capacity = cfg.ifq_capacity;
  lp.broadcast_jitter_max = cfg.broadcast_jitter_max;
  lp.loss_probability = cfg.loss_probability;
  Medium medium(engine, trace, mobility, lp, &jitter);

  long uid = 0;
  std::map<FlowKey, CbrSink*> cbr_sinks;
  std::map<FlowKey, ReliableReceiver*> receivers;
  std::map<FlowKey, ReliableSender*> senders;  // keyed by the ack's flow

  std::vector<std::unique_ptr<RoutingAgent>> agents(cfg.nodes);
  for (NodeId n = 0; n < cfg.nodes; ++n) {
    AgentContext ctx;
    ctx.self = n;
    ctx.engine = &engine;
    ctx.medium = &medium;
    ctx.trace = &trace;
    ctx.uid_counter = &uid;
    ctx.deliver_up = [&, n](const Packet& pkt) {
      if (pkt.kind == PacketKind::Ack) {
        if (auto it = senders.find(pkt.flow); it != senders.end())
          it->second->on_ack(pkt);
      } else if (auto it = cbr_sinks.find(pkt.flow); it != cbr_sinks.end()) {
        it->second->on_data(pkt);
      } else if (auto it = receivers.find(pkt.flow); it != receivers.end()) {
        it->second->on_data(pkt);
      }
    };
    if (cfg.protocol == Protocol::Aodv)
      agents[n] = std::make_unique<AodvAgent>(std::move(ctx));
    else
      agents[n] = std::make_unique<DsrAgent>(std::move(ctx));
  }

  medium.set_handlers(
      [&](NodeId rx, const Packet& pkt, NodeId prev) {
        agents[rx]->receive(pkt, prev);
      },
      [&](NodeId sender, const Packet& pkt, NodeId next_hop) {
        agents[sender]->on_link_break(pkt, next_hop);
      });

  RngStream topology(cfg.seed, "topology");
  RngStream traffic_rng(cfg.seed, "traffic");
  auto pairs = pick_pairs(cfg.nodes, cfg.connections, topology);

  SimTime end = time_from_seconds(cfg.sim_time);
  std::vector<FlowSpec> flows;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    FlowSpec f;
    f.src = pairs[i].first;
    f.dst = pairs[i].second;
    f.sport = f.dport = static_cast<int>(i);
    f.kind = cfg.traffic;
    f.start_at =
        time_from_seconds(traffic_rng.uniform(0.0, cfg.start_stagger_max));
    f.stop_at = end;
    f.cbr_size = cfg.cbr_size;
    f.cbr_interval = time_from_seconds(cfg.cbr_interval);
    f.tcp_segment = cfg.tcp_segment;
    flows.push_back(f);
  }

  std::vector<std::unique_ptr<CbrSource>> cbr_sources;
  std::vector<std::unique_ptr<CbrSink>> cbr_sink_storage;
  std::vector<std::unique_ptr<ReliableSender>> sender_storage;
  std::vector<std::unique_ptr<ReliableReceiver>> receiver_storage;

  for (const FlowSpec& f : flows) {
    if (f.kind == TrafficKind::Cbr) {
      cbr_sources.push_back(std::make_unique<CbrSource>(
          engine, trace, *agents[f.src], f, &uid));
      cbr_sink_storage.push_back(std::make_unique<CbrSink>(engine, trace, f));
      cbr_sinks[f.key()] = cbr_sink_storage.back().get();
    } else {
      sender_storage.push_back(std::make_unique<ReliableSender>(
          engine, trace, *agents[f.src], f, &uid));
      senders[f.ack_key()] = sender_storage.back().get();
      receiver_storage.push_back(std::make_unique<ReliableReceiver>(
          engine, trace, *agents[f.dst], f, &uid));
      receivers[f.key()] = receiver_storage.back().get();
    }
  }
  for (auto& s : cbr_sources) s->start();
  for (auto& s : sender_storage) s->start();

  RunResult result;
  result.events = engine.run(end);
  if (trace_file.is_open()) trace_file.close();

  PktType data_type =
      cfg.traffic == TrafficKind::Cbr ? PktType::Cbr : PktType::Tcp;
  result.metrics = compute_metrics(trace.records(), data_type);
  if (!out.agt_and_drops_only)
    result.script_metrics =
        compute_metrics_script_compat(trace.records(), data_type);
  result.trace_records = trace.emitted();
  return result;
}

}  // namespace vanet
