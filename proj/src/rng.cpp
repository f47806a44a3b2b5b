#include "vanetsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace vanet {

namespace {

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t scenario_seed, std::string_view label)
    : gen_(mix64(scenario_seed ^ fnv1a64(label))) {}

double RngStream::uniform(double lo, double hi) {
  if (lo > hi) throw std::logic_error("RngStream::uniform: lo > hi");
  double v = lo + (hi - lo) * uniform01();
  // the affine map can round up onto hi; the contract is the half-open
  // interval [lo, hi)
  if (v >= hi && lo < hi) v = std::nextafter(hi, lo);
  return v;
}

std::int64_t RngStream::uniform_int(std::int64_t lo, std::int64_t hi) {
  if (lo > hi) throw std::logic_error("RngStream::uniform_int: lo > hi");
  std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

}  // namespace vanet
