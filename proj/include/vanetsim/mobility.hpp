#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "vanetsim/packet.hpp"
#include "vanetsim/rng.hpp"
#include "vanetsim/sim_time.hpp"

namespace vanet {

struct Position {
  double x = 0;
  double y = 0;
};

double distance(const Position& a, const Position& b);

// One random-waypoint movement: travel origin -> destination at a fixed
// speed, then rest at the destination until pause_until.
struct MotionLeg {
  Position origin;
  Position destination;
  double speed = 0;        // m/s
  SimTime depart_at = 0;
  SimTime arrive_at = 0;
  SimTime pause_until = 0;
};

struct MobilityParams {
  int nodes = 0;
  double width = 840;
  double height = 840;
  double v_min = 0.1;      // > 0 avoids the classic speed-decay pathology
  double v_max = 15;
  double pause = 50;       // seconds at each waypoint
  SimTime horizon = 0;     // generate legs covering [0, horizon]
};

struct NodeItinerary {
  Position initial;
  SimTime first_move_at = 0;  // initial pause drawn uniform in [0, pause]
  std::vector<MotionLeg> legs;
};

// Draws the next waypoint leg for a node at rest: destination uniform over
// the arena, speed uniform over [v_min, v_max], pause fixed by the scenario.
// Travel duration is rounded up to the microsecond grid so the realized
// speed never exceeds the drawn speed.
MotionLeg next_leg(const Position& from, SimTime now, RngStream& rng,
                   const MobilityParams& p);

// Whole-run motion for every node, generated up front from the dedicated
// mobility stream.  Pure function of (seed, params): identical for AODV and
// DSR runs with equal seeds, regardless of traffic.
class MobilityModel {
 public:
  static MobilityModel generate(std::uint64_t seed, const MobilityParams& p);

  // Builds a model from explicit itineraries (pinned topologies, schedule
  // reuse).  itineraries.size() must equal p.nodes.
  static MobilityModel from_itineraries(const MobilityParams& p,
                                        std::vector<NodeItinerary> itineraries);

  const MobilityParams& params() const { return params_; }
  const std::vector<NodeItinerary>& itineraries() const { return nodes_; }

  // Piecewise-linear interpolation along the current leg; the destination is
  // held during pauses.  Never leaves the arena.
  Position position_at(NodeId node, SimTime t) const;

  // All other nodes within Euclidean distance <= range (boundary inclusive).
  std::vector<NodeId> neighbors(NodeId node, SimTime t, double range) const;

  // One line per leg: node, depart time, destination, speed, pause; plus one
  // init line per node so a schedule can be reused across protocols.
  void export_schedule(std::ostream& out) const;

 private:
  MobilityParams params_;
  std::vector<NodeItinerary> nodes_;
};

}  // namespace vanet
