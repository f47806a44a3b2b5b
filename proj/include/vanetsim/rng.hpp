#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace vanet {

// One named random stream per concern (mobility, traffic, jitter, topology),
// each seeded from (scenario seed, label).  Streams never share state, so
// e.g. changing traffic parameters cannot perturb mobility trajectories.
// All draws are mapped from raw engine output by hand; the standard
// distributions are not bit-stable across library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t scenario_seed, std::string_view label);

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [lo, hi); lo == hi yields lo.  lo > hi is a programming error.
  double uniform(double lo, double hi);

  // Uniform integer in [lo, hi], both ends inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::mt19937_64 gen_;
};

}  // namespace vanet
