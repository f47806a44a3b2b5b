#pragma once

#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

#include "vanetsim/sim_time.hpp"

namespace vanet {

// Deterministic discrete-event engine.  Events dispatch in strict
// (fire_at, seq) order, where seq is the monotone insertion counter; events
// scheduled for the same instant therefore run in insertion order.
// Single-threaded: one engine per simulation run.
class Engine {
 public:
  using Handle = std::uint64_t;

  SimTime now() const { return now_; }

  // fire_at < now() is a programming error, not a simulation outcome.
  // target is a node id, or -1 for global events; it is diagnostic only.
  Handle schedule(SimTime fire_at, std::function<void()> action,
                  int target = -1);

  // A handle cancelled before its fire time never executes.
  void cancel(Handle h);

  // Dispatches every pending event with fire_at <= until, then leaves the
  // clock at until.  Returns the number of events dispatched by this call.
  std::size_t run(SimTime until);

  std::size_t pending() const { return heap_.size() - cancelled_.size(); }

 private:
  struct Entry {
    SimTime fire_at;
    std::uint64_t seq;
    int target;
    std::function<void()> action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      return a.seq > b.seq;
    }
  };

  std::vector<Entry> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
};

}  // namespace vanet
