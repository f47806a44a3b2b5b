#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "vanetsim/types.hpp"

namespace vanet {

// One simulation cell: protocol, traffic type, arena, motion and medium
// parameters, and the seed.  Defaults are the standard 840 m x 840 m,
// 200 s, 8-connection setup.
struct ScenarioConfig {
  Protocol protocol = Protocol::Aodv;
  TrafficKind traffic = TrafficKind::Cbr;
  int nodes = 30;
  double area_width = 840;
  double area_height = 840;
  double sim_time = 200;     // seconds
  double v_min = 0.1;        // m/s
  double v_max = 15;         // m/s
  double pause = 50;         // seconds
  int connections = 8;
  std::uint64_t seed = 0;

  double range = 250;        // meters
  double bitrate = 2e6;      // bits/s
  int ifq_capacity = 50;
  double broadcast_jitter_max = 0.01;  // seconds
  double loss_probability = 0;

  int cbr_size = 512;        // bytes
  double cbr_interval = 0.25;  // seconds
  int tcp_segment = 1040;    // bytes
  double start_stagger_max = 10;  // flow starts uniform in [0, this] seconds

  bool operator==(const ScenarioConfig&) const = default;

  // Out-of-range values are hard errors naming the field.
  void validate() const;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented `key = value` text; '#' starts a comment.  Unknown keys and
// malformed values are hard errors with file/line positions.  Unspecified
// fields keep their defaults.
ScenarioConfig parse_config(std::istream& in, const std::string& origin);
ScenarioConfig parse_config_text(std::string_view text,
                                 const std::string& origin);
ScenarioConfig load_config(const std::string& path);

// Emits every field; load(save(c)) == c.
std::string save_config(const ScenarioConfig& c);

// Applies one key/value pair; `where` prefixes error messages.
// Returns false if the key is not a scenario key.
bool apply_config_entry(ScenarioConfig& c, std::string_view key,
                        std::string_view value, const std::string& where);

// Shared low-level parsers (also used by the sweep grid loader).
double parse_double_value(std::string_view value, std::string_view key,
                          const std::string& where);
long long parse_int_value(std::string_view value, std::string_view key,
                          const std::string& where);
std::string_view trim(std::string_view s);

}  // namespace vanet
