#include "vanetsim/mobility.hpp"

#include <cassert>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace vanet {

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

MotionLeg next_leg(const Position& from, SimTime now, RngStream& rng,
                   const MobilityParams& p) {
  MotionLeg leg;
  leg.origin = from;
  leg.destination = {rng.uniform(0.0, p.width), rng.uniform(0.0, p.height)};
  leg.speed = rng.uniform(p.v_min, p.v_max);
  leg.depart_at = now;
  double dist = distance(leg.origin, leg.destination);
  auto travel_us =
      static_cast<SimTime>(std::ceil(dist / leg.speed * kMicrosPerSecond));
  leg.arrive_at = now + travel_us;
  leg.pause_until = leg.arrive_at + time_from_seconds(p.pause);
  return leg;
}

MobilityModel MobilityModel::generate(std::uint64_t seed,
                                      const MobilityParams& p) {
  if (p.nodes <= 0) throw std::logic_error("MobilityModel: nodes must be > 0");
  if (!(p.v_min > 0) || p.v_max < p.v_min)
    throw std::logic_error("MobilityModel: need 0 < v_min <= v_max");

  MobilityModel m;
  m.params_ = p;
  m.nodes_.resize(p.nodes);
  RngStream rng(seed, "mobility");
  for (auto& node : m.nodes_) {
    node.initial = {rng.uniform(0.0, p.width), rng.uniform(0.0, p.height)};
    // first pause uniform in [0, pause] desynchronizes node starts
    node.first_move_at = time_from_seconds(rng.uniform(0.0, p.pause));
    Position at = node.initial;
    SimTime t = node.first_move_at;
    while (t < p.horizon) {
      node.legs.push_back(next_leg(at, t, rng, p));
      at = node.legs.back().destination;
      t = node.legs.back().pause_until;
    }
  }
  return m;
}

MobilityModel MobilityModel::from_itineraries(
    const MobilityParams& p, std::vector<NodeItinerary> itineraries) {
  if (static_cast<int>(itineraries.size()) != p.nodes)
    throw std::logic_error("MobilityModel: itinerary count != nodes");
  MobilityModel m;
  m.params_ = p;
  m.nodes_ = std::move(itineraries);
  return m;
}

Position MobilityModel::position_at(NodeId node, SimTime t) const {
  assert(node >= 0 && node < static_cast<NodeId>(nodes_.size()));
  const NodeItinerary& it = nodes_[node];
  if (t <= it.first_move_at || it.legs.empty()) return it.initial;
  // few legs per node at these horizons; linear scan is fine
  for (const MotionLeg& leg : it.legs) {
    if (t >= leg.pause_until) continue;
    if (t >= leg.arrive_at) return leg.destination;
    if (leg.arrive_at == leg.depart_at) return leg.destination;
    double f = static_cast<double>(t - leg.depart_at) /
               static_cast<double>(leg.arrive_at - leg.depart_at);
    return {leg.origin.x + f * (leg.destination.x - leg.origin.x),
            leg.origin.y + f * (leg.destination.y - leg.origin.y)};
  }
  return it.legs.back().destination;
}

std::vector<NodeId> MobilityModel::neighbors(NodeId node, SimTime t,
                                             double range) const {
  assert(range > 0);
  std::vector<NodeId> out;
  Position self = position_at(node, t);
  double r2 = range * range;
  for (NodeId other = 0; other < static_cast<NodeId>(nodes_.size()); ++other) {
    if (other == node) continue;
    Position q = position_at(other, t);
    double dx = q.x - self.x, dy = q.y - self.y;
    if (dx * dx + dy * dy <= r2) out.push_back(other);
  }
  return out;
}

void MobilityModel::export_schedule(std::ostream& out) const {
  char buf[256];
  for (NodeId id = 0; id < static_cast<NodeId>(nodes_.size()); ++id) {
    const NodeItinerary& it = nodes_[id];
    std::snprintf(buf, sizeof(buf), "node %d init %.17g %.17g until %s", id,
                  it.initial.x, it.initial.y,
                  format_trace_time(it.first_move_at).c_str());
    out << buf << '\n';
    for (const MotionLeg& leg : it.legs) {
      std::snprintf(buf, sizeof(buf),
                    "node %d leg %s dest %.17g %.17g speed %.17g pause %s", id,
                    format_trace_time(leg.depart_at).c_str(), leg.destination.x,
                    leg.destination.y, leg.speed,
                    format_trace_time(leg.pause_until).c_str());
      out << buf << '\n';
    }
  }
}

}  // namespace vanet
