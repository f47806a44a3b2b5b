#include "vanetsim/medium.hpp"

#include <tuple>
#include <vector>

#include "doctest.h"
#include "sim_fixtures.hpp"

using namespace vanet;

namespace {

struct MediumHarness {
  MobilityModel mobility;
  Engine engine;
  TraceLog trace;
  RngStream rng{1, "jitter"};
  Medium medium;
  struct Delivery {
    NodeId rx;
    Packet pkt;
    NodeId prev;
    SimTime at;
  };
  struct Failure {
    NodeId sender;
    Packet pkt;
    NodeId next_hop;
  };
  std::vector<Delivery> delivered;
  std::vector<Failure> failed;

  explicit MediumHarness(std::vector<Position> pos, LinkParams lp = {},
                         bool with_jitter = false)
      : mobility(test::parked_at(pos)),
        medium(engine, trace, mobility, lp, with_jitter ? &rng : nullptr) {
    medium.set_handlers(
        [this](NodeId rx, const Packet& p, NodeId prev) {
          delivered.push_back({rx, p, prev, engine.now()});
        },
        [this](NodeId s, const Packet& p, NodeId nh) {
          failed.push_back({s, p, nh});
        });
  }

  Packet pkt(int wire_size, long seqno = 0) {
    Packet p;
    p.wire_size = wire_size;
    p.payload_size = wire_size;
    p.seqno = seqno;
    return p;
  }

  long drop_records() const {
    long n = 0;
    for (const TraceRecord& r : trace.records())
      if (r.event == TraceEvent::Drop) ++n;
    return n;
  }
};

}  // namespace

TEST_CASE("transmission delay is wire bits over bitrate, floored at 1 us") {
  MediumHarness h({{0, 0}, {100, 0}});
  CHECK(h.medium.tx_delay(532) == 2128);  // 532*8 / 2e6 s
  CHECK(h.medium.tx_delay(500) == 2000);
  CHECK(h.medium.tx_delay(1) == 4);

  LinkParams fast;
  fast.bitrate = 1e9;
  MediumHarness g({{0, 0}}, fast);
  CHECK(g.medium.tx_delay(1) == 1);  // would round to 0
}

TEST_CASE("unicast delivers after the transmission delay with prev hop set") {
  MediumHarness h({{0, 0}, {100, 0}});
  CHECK(h.medium.enqueue(0, h.pkt(500, 7), 1) == Medium::Enqueue::Accepted);
  h.engine.run(10'000);
  REQUIRE(h.delivered.size() == 1);
  CHECK(h.delivered[0].rx == 1);
  CHECK(h.delivered[0].prev == 0);
  CHECK(h.delivered[0].pkt.seqno == 7);
  CHECK(h.delivered[0].at == 2000);
}

TEST_CASE("the interface is half duplex: queued packets serialize") {
  MediumHarness h({{0, 0}, {100, 0}});
  h.medium.enqueue(0, h.pkt(500, 1), 1);
  h.medium.enqueue(0, h.pkt(500, 2), 1);
  h.medium.enqueue(0, h.pkt(250, 3), 1);
  h.engine.run(100'000);
  REQUIRE(h.delivered.size() == 3);
  CHECK(h.delivered[0].at == 2000);
  CHECK(h.delivered[1].at == 4000);
  CHECK(h.delivered[2].at == 5000);
  CHECK(h.medium.queue_length(0) == 0);
}

TEST_CASE("a full interface queue drops with a MAC-layer drop record") {
  LinkParams lp;
  lp.ifq_capacity = 2;
  MediumHarness h({{0, 0}, {100, 0}}, lp);
  CHECK(h.medium.enqueue(0, h.pkt(500, 1), 1) == Medium::Enqueue::Accepted);
  CHECK(h.medium.enqueue(0, h.pkt(500, 2), 1) == Medium::Enqueue::Accepted);
  CHECK(h.medium.enqueue(0, h.pkt(500, 3), 1) == Medium::Enqueue::Accepted);
  CHECK(h.medium.enqueue(0, h.pkt(500, 4), 1) == Medium::Enqueue::Dropped);
  REQUIRE(h.trace.records().size() == 1);
  const TraceRecord& d = h.trace.records()[0];
  CHECK(d.event == TraceEvent::Drop);
  CHECK(d.layer == TraceLayer::Mac);
  CHECK(d.node == 0);
  CHECK(d.seqno == 4);
  CHECK(d.size == 500);
  h.engine.run(100'000);
  CHECK(h.delivered.size() == 3);
}

TEST_CASE("unicast to an out-of-range next hop notifies the sender") {
  MediumHarness h({{0, 0}, {1000, 0}});
  h.medium.enqueue(0, h.pkt(500, 9), 1);
  h.engine.run(100'000);
  CHECK(h.delivered.empty());
  REQUIRE(h.failed.size() == 1);
  CHECK(h.failed[0].sender == 0);
  CHECK(h.failed[0].next_hop == 1);
  CHECK(h.failed[0].pkt.seqno == 9);
}

TEST_CASE("connectivity is sampled when the transmission starts") {
  // receiver walks out of range while the sender's first packet is on the
  // air; the second transmission starts after it left
  std::vector<NodeItinerary> nodes;
  nodes.push_back(test::parked({0, 0}));
  nodes.push_back(test::one_leg({240, 0}, {10000, 0}, 0.001, 5000));
  MobilityParams p;
  p.nodes = 2;
  p.width = p.height = 100000;
  p.horizon = test::kFixtureHorizon;
  MobilityModel m = MobilityModel::from_itineraries(p, std::move(nodes));

  Engine engine;
  TraceLog trace;
  LinkParams lp;
  Medium medium(engine, trace, m, lp, nullptr);
  std::vector<NodeId> delivered;
  std::vector<NodeId> failed;
  medium.set_handlers(
      [&](NodeId rx, const Packet&, NodeId) { delivered.push_back(rx); },
      [&](NodeId s, const Packet&, NodeId) { failed.push_back(s); });
  Packet pkt;
  pkt.wire_size = 500;
  medium.enqueue(0, pkt, 1);  // transmits at t=0: node 1 still at 240 m
  engine.run(1'000'000);
  CHECK(delivered.size() == 1);
  medium.enqueue(0, pkt, 1);  // node 1 long gone
  engine.run(2'000'000);
  CHECK(delivered.size() == 1);
  CHECK(failed.size() == 1);
}

TEST_CASE("broadcast reaches exactly the in-range nodes") {
  MediumHarness h({{0, 0}, {100, 0}, {250, 0}, {251, 0}, {0, 249}});
  h.medium.enqueue(0, h.pkt(48, 5), kBroadcast);
  h.engine.run(1'000'000);
  std::vector<NodeId> got;
  for (const auto& d : h.delivered) got.push_back(d.rx);
  CHECK(got == std::vector<NodeId>{1, 2, 4});
}

TEST_CASE("broadcasts defer by a bounded jitter; unicast never does") {
  LinkParams lp;
  MediumHarness h({{0, 0}, {100, 0}}, lp, true);
  h.medium.enqueue(0, h.pkt(500, 1), kBroadcast);
  h.engine.run(1'000'000);
  REQUIRE(h.delivered.size() == 1);
  SimTime jitter = h.delivered[0].at - 2000;
  CHECK(jitter >= 0);
  CHECK(jitter < 10'000);  // 10 ms default bound

  MediumHarness u({{0, 0}, {100, 0}}, lp, true);
  u.medium.enqueue(0, u.pkt(500, 1), 1);
  u.engine.run(1'000'000);
  REQUIRE(u.delivered.size() == 1);
  CHECK(u.delivered[0].at == 2000);
}

TEST_CASE("optional loss drops deliveries with receiver-side drop records") {
  std::vector<Position> pos{{0, 0}};
  for (int i = 1; i <= 40; ++i) pos.push_back({static_cast<double>(i), 0});
  LinkParams lp;
  lp.loss_probability = 0.5;
  MediumHarness h(pos, lp, true);
  h.medium.enqueue(0, h.pkt(500, 3), kBroadcast);
  h.engine.run(1'000'000);
  long drops = h.drop_records();
  CHECK(static_cast<long>(h.delivered.size()) + drops == 40);
  CHECK(drops > 0);
  CHECK(h.delivered.size() > 0);
  for (const TraceRecord& r : h.trace.records())
    if (r.event == TraceEvent::Drop) CHECK(r.layer == TraceLayer::Mac);
}

TEST_CASE("link parameter validation rejects nonsense") {
  LinkParams lp;
  lp.range = 0;
  CHECK_THROWS(lp.validate());
  lp = LinkParams{};
  lp.loss_probability = 1.0;
  CHECK_THROWS(lp.validate());
  lp = LinkParams{};
  CHECK_NOTHROW(lp.validate());
}
