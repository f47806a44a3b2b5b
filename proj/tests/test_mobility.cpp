#include "vanetsim/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "sim_fixtures.hpp"

using namespace vanet;

namespace {

MobilityParams small_arena() {
  MobilityParams p;
  p.nodes = 12;
  p.width = 500;
  p.height = 300;
  p.v_min = 0.1;
  p.v_max = 15;
  p.pause = 20;
  p.horizon = 400 * kMicrosPerSecond;
  return p;
}

}  // namespace

TEST_CASE("waypoints, speeds and pauses honor the scenario parameters") {
  MobilityParams p = small_arena();
  MobilityModel m = MobilityModel::generate(9, p);
  REQUIRE(m.itineraries().size() == 12);
  for (const NodeItinerary& it : m.itineraries()) {
    CHECK(it.initial.x >= 0);
    CHECK(it.initial.x <= p.width);
    CHECK(it.initial.y >= 0);
    CHECK(it.initial.y <= p.height);
    CHECK(it.first_move_at >= 0);
    CHECK(it.first_move_at <= time_from_seconds(p.pause));
    CHECK(!it.legs.empty());
    SimTime t = it.first_move_at;
    for (const MotionLeg& leg : it.legs) {
      CHECK(leg.depart_at == t);
      CHECK(leg.destination.x >= 0);
      CHECK(leg.destination.x <= p.width);
      CHECK(leg.destination.y >= 0);
      CHECK(leg.destination.y <= p.height);
      CHECK(leg.speed >= p.v_min);
      CHECK(leg.speed < p.v_max);
      // travel time is the distance at the drawn speed, rounded up to the
      // microsecond grid
      double dist = distance(leg.origin, leg.destination);
      auto want = static_cast<SimTime>(
          std::ceil(dist / leg.speed * kMicrosPerSecond));
      CHECK(leg.arrive_at - leg.depart_at == want);
      CHECK(leg.pause_until - leg.arrive_at == time_from_seconds(p.pause));
      t = leg.pause_until;
    }
    // itinerary covers the whole run
    CHECK(t >= p.horizon);
  }
}

TEST_CASE("same seed reproduces the exact itinerary, different seeds move") {
  MobilityParams p = small_arena();
  MobilityModel a = MobilityModel::generate(4, p);
  MobilityModel b = MobilityModel::generate(4, p);
  MobilityModel c = MobilityModel::generate(5, p);
  std::ostringstream sa, sb, sc;
  a.export_schedule(sa);
  b.export_schedule(sb);
  c.export_schedule(sc);
  CHECK(sa.str() == sb.str());
  CHECK(sa.str() != sc.str());
}

TEST_CASE("position interpolates linearly along a leg and holds at pauses") {
  // scripted node: depart (0,0) at t=10s, arrive (100,0) at t=20s (10 m/s)
  std::vector<NodeItinerary> nodes;
  nodes.push_back(test::one_leg({0, 0}, {100, 0}, 10, 10));
  MobilityParams p;
  p.nodes = 1;
  p.width = p.height = 1000;
  p.horizon = test::kFixtureHorizon;
  MobilityModel m = MobilityModel::from_itineraries(p, std::move(nodes));

  CHECK(m.position_at(0, 0).x == doctest::Approx(0));
  CHECK(m.position_at(0, time_from_seconds(10)).x == doctest::Approx(0));
  CHECK(m.position_at(0, time_from_seconds(15)).x == doctest::Approx(50));
  CHECK(m.position_at(0, time_from_seconds(17.5)).x == doctest::Approx(75));
  CHECK(m.position_at(0, time_from_seconds(20)).x == doctest::Approx(100));
  CHECK(m.position_at(0, time_from_seconds(9999)).x == doctest::Approx(100));
  CHECK(m.position_at(0, time_from_seconds(15)).y == doctest::Approx(0));
}

TEST_CASE("generated positions never leave the arena at any sampled instant") {
  MobilityParams p = small_arena();
  MobilityModel m = MobilityModel::generate(123, p);
  for (NodeId n = 0; n < p.nodes; ++n)
    for (SimTime t = 0; t <= p.horizon; t += 7'000'000) {
      Position pos = m.position_at(n, t);
      CHECK(pos.x >= 0);
      CHECK(pos.x <= p.width);
      CHECK(pos.y >= 0);
      CHECK(pos.y <= p.height);
    }
}

TEST_CASE("neighbors use an inclusive unit-disk boundary") {
  MobilityModel m = test::parked_at({{0, 0}, {250, 0}, {250.0001, 0}, {100, 0}});
  auto n0 = m.neighbors(0, 0, 250);
  CHECK(std::count(n0.begin(), n0.end(), 1) == 1);  // exactly at range
  CHECK(std::count(n0.begin(), n0.end(), 2) == 0);  // just past range
  CHECK(std::count(n0.begin(), n0.end(), 3) == 1);
  CHECK(std::count(n0.begin(), n0.end(), 0) == 0);  // never its own neighbor
}

TEST_CASE("neighbors track motion over time") {
  // node 1 walks out of range of node 0 at 100 m/s starting at t=1s
  std::vector<NodeItinerary> nodes;
  nodes.push_back(test::parked({0, 0}));
  nodes.push_back(test::one_leg({200, 0}, {2000, 0}, 1, 100));
  MobilityParams p;
  p.nodes = 2;
  p.width = p.height = 10000;
  p.horizon = test::kFixtureHorizon;
  MobilityModel m = MobilityModel::from_itineraries(p, std::move(nodes));

  CHECK(m.neighbors(0, 0, 250).size() == 1);
  CHECK(m.neighbors(0, time_from_seconds(1.4), 250).size() == 1);  // at 240 m
  CHECK(m.neighbors(0, time_from_seconds(2), 250).empty());        // at 300 m
}

TEST_CASE("schedule export lists init and every leg, and reproduces") {
  MobilityParams p = small_arena();
  p.nodes = 2;
  MobilityModel m = MobilityModel::generate(31, p);
  std::ostringstream out;
  m.export_schedule(out);
  std::istringstream in(out.str());
  std::string line;
  int init_lines = 0, leg_lines = 0;
  while (std::getline(in, line)) {
    if (line.find(" init ") != std::string::npos) ++init_lines;
    if (line.find(" leg ") != std::string::npos) ++leg_lines;
  }
  CHECK(init_lines == 2);
  std::size_t total_legs =
      m.itineraries()[0].legs.size() + m.itineraries()[1].legs.size();
  CHECK(leg_lines == static_cast<int>(total_legs));
}

TEST_CASE("explicit itineraries must match the node count") {
  MobilityParams p;
  p.nodes = 3;
  CHECK_THROWS_AS(MobilityModel::from_itineraries(p, {test::parked({0, 0})}),
                  std::logic_error);
}

TEST_CASE("degenerate speed parameters are rejected") {
  MobilityParams p = small_arena();
  p.v_min = 0;
  CHECK_THROWS_AS(MobilityModel::generate(1, p), std::logic_error);
  p.v_min = 5;
  p.v_max = 4;
  CHECK_THROWS_AS(MobilityModel::generate(1, p), std::logic_error);
}
