#include "vanetsim/sim_time.hpp"

#include <cstdio>

namespace vanet {

std::string format_trace_time(SimTime t) {
  long long sec = t / kMicrosPerSecond;
  long long micro = t % kMicrosPerSecond;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%lld.%06lld000", sec, micro);
  return buf;
}

}  // namespace vanet
