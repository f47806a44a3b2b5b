#include "vanetsim/engine.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace vanet {

Engine::Handle Engine::schedule(SimTime fire_at, std::function<void()> action,
                                int target) {
  if (fire_at < now_)
    throw std::logic_error("Engine::schedule: fire_at is in the past");
  Handle h = next_seq_++;
  heap_.push_back(Entry{fire_at, h, target, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  return h;
}

void Engine::cancel(Handle h) { cancelled_.insert(h); }

std::size_t Engine::run(SimTime until) {
  std::size_t dispatched = 0;
  while (!heap_.empty() && heap_.front().fire_at <= until) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    if (auto it = cancelled_.find(e.seq); it != cancelled_.end()) {
      cancelled_.erase(it);
      continue;
    }
    now_ = e.fire_at;
    e.action();
    ++dispatched;
  }
  now_ = until;
  return dispatched;
}

}  // namespace vanet
