#include "vanetsim/scenario.hpp"

#include <cctype>
#include <cerrno>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vanet {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where.empty() ? what : where + ": " + what);
}

std::string bad_value(std::string_view key, std::string_view value) {
  return "invalid value for " + std::string(key) + ": '" + std::string(value) +
         "'";
}

}  // namespace

double parse_double_value(std::string_view value, std::string_view key,
                          const std::string& where) {
  std::string v(trim(value));
  if (v.empty()) fail(where, bad_value(key, value));
  errno = 0;
  char* end = nullptr;
  double d = std::strtod(v.c_str(), &end);
  if (errno != 0 || end != v.c_str() + v.size())
    fail(where, bad_value(key, value));
  return d;
}

long long parse_int_value(std::string_view value, std::string_view key,
                          const std::string& where) {
  std::string v(trim(value));
  if (v.empty()) fail(where, bad_value(key, value));
  errno = 0;
  char* end = nullptr;
  long long n = std::strtoll(v.c_str(), &end, 10);
  if (errno != 0 || end != v.c_str() + v.size())
    fail(where, bad_value(key, value));
  return n;
}

bool apply_config_entry(ScenarioConfig& c, std::string_view key,
                        std::string_view value, const std::string& where) {
  auto as_double = [&] { return parse_double_value(value, key, where); };
  auto as_int = [&] {
    long long n = parse_int_value(value, key, where);
    if (n < INT_MIN || n > INT_MAX) fail(where, bad_value(key, value));
    return static_cast<int>(n);
  };

  if (key == "protocol") {
    try {
      c.protocol = protocol_from_string(trim(value));
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  } else if (key == "traffic") {
    try {
      c.traffic = traffic_from_string(trim(value));
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
  } else if (key == "nodes") {
    c.nodes = as_int();
  } else if (key == "area_width") {
    c.area_width = as_double();
  } else if (key == "area_height") {
    c.area_height = as_double();
  } else if (key == "sim_time") {
    c.sim_time = as_double();
  } else if (key == "v_min") {
    c.v_min = as_double();
  } else if (key == "v_max") {
    c.v_max = as_double();
  } else if (key == "pause") {
    c.pause = as_double();
  } else if (key == "connections") {
    c.connections = as_int();
  } else if (key == "seed") {
    long long n = parse_int_value(value, key, where);
    if (n < 0) fail(where, bad_value(key, value));
    c.seed = static_cast<std::uint64_t>(n);
  } else if (key == "range") {
    c.range = as_double();
  } else if (key == "bitrate") {
    c.bitrate = as_double();
  } else if (key == "ifq_capacity") {
    c.ifq_capacity = as_int();
  } else if (key == "broadcast_jitter_max") {
    c.broadcast_jitter_max = as_double();
  } else if (key == "loss_probability") {
    c.loss_probability = as_double();
  } else if (key == "cbr_size") {
    c.cbr_size = as_int();
  } else if (key == "cbr_interval") {
    c.cbr_interval = as_double();
  } else if (key == "tcp_segment") {
    c.tcp_segment = as_int();
  } else if (key == "start_stagger_max") {
    c.start_stagger_max = as_double();
  } else {
    return false;
  }
  return true;
}

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
  ScenarioConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    if (auto hash = s.find('#'); hash != std::string_view::npos)
      s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::string where = origin + " line " + std::to_string(lineno);
    auto eq = s.find('=');
    if (eq == std::string_view::npos)
      fail(where, "expected 'key = value', got '" + std::string(s) + "'");
    std::string_view key = trim(s.substr(0, eq));
    std::string_view value = trim(s.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    if (!apply_config_entry(c, key, value, where))
      fail(where, "unknown key '" + std::string(key) + "'");
  }
  c.validate();
  return c;
}

ScenarioConfig parse_config_text(std::string_view text,
                                 const std::string& origin) {
  std::istringstream in{std::string(text)};
  return parse_config(in, origin);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in, path);
}

void ScenarioConfig::validate() const {
  auto check = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  check(nodes >= 2, "nodes must be >= 2 (got " + std::to_string(nodes) + ")");
  check(connections >= 1,
        "connections must be >= 1 (got " + std::to_string(connections) + ")");
  check(sim_time > 0, "sim_time must be > 0");
  check(area_width > 0 && area_height > 0,
        "area_width and area_height must be > 0");
  check(v_min > 0, "v_min must be > 0");
  check(v_max >= v_min, "v_max must be >= v_min");
  check(pause >= 0, "pause must be >= 0");
  check(range > 0, "range must be > 0");
  check(bitrate > 0, "bitrate must be > 0");
  check(ifq_capacity >= 1, "ifq_capacity must be >= 1");
  check(broadcast_jitter_max > 0, "broadcast_jitter_max must be > 0");
  check(loss_probability >= 0 && loss_probability < 1,
        "loss_probability must be in [0, 1)");
  check(cbr_size > 0, "cbr_size must be > 0");
  check(cbr_interval > 0, "cbr_interval must be > 0");
  check(tcp_segment > 0, "tcp_segment must be > 0");
  check(start_stagger_max >= 0, "start_stagger_max must be >= 0");
}

std::string save_config(const ScenarioConfig& c) {
  char buf[128];
  std::string out;
  auto put = [&](const char* key, const std::string& v) {
    out += key;
    out += " = ";
    out += v;
    out += '\n';
  };
  auto num = [&](double d) {
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return std::string(buf);
  };
  put("protocol", protocol_name(c.protocol));
  put("traffic", traffic_name(c.traffic));
  put("nodes", std::to_string(c.nodes));
  put("area_width", num(c.area_width));
  put("area_height", num(c.area_height));
  put("sim_time", num(c.sim_time));
  put("v_min", num(c.v_min));
  put("v_max", num(c.v_max));
  put("pause", num(c.pause));
  put("connections", std::to_string(c.connections));
  put("seed", std::to_string(c.seed));
  put("range", num(c.range));
  put("bitrate", num(c.bitrate));
  put("ifq_capacity", std::to_string(c.ifq_capacity));
  put("broadcast_jitter_max", num(c.broadcast_jitter_max));
  put("loss_probability", num(c.loss_probability));
  put("cbr_size", std::to_string(c.cbr_size));
  put("cbr_interval", num(c.cbr_interval));
  put("tcp_segment", std::to_string(c.tcp_segment));
  put("start_stagger_max", num(c.start_stagger_max));
  return out;
}

}  // namespace vanet
