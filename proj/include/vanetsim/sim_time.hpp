#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace vanet {

// Simulation time in integer microseconds.  The integer grid keeps event
// ordering and trace bytes identical across platforms; traces render it as
// seconds with 9 decimal places.
using SimTime = std::int64_t;

constexpr SimTime kMicrosPerSecond = 1'000'000;

inline SimTime time_from_seconds(double s) {
  return static_cast<SimTime>(std::llround(s * 1e6));
}

inline double time_to_seconds(SimTime t) {
  return static_cast<double>(t) / 1e6;
}

inline double time_to_millis(SimTime t) {
  return static_cast<double>(t) / 1e3;
}

// "<sec>.<9 digits>"; pure integer formatting, the last three digits are
// always zero on the microsecond grid.
std::string format_trace_time(SimTime t);

}  // namespace vanet
