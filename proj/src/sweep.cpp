#include "vanetsim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "vanetsim/simulation.hpp"

namespace vanet {

namespace {

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

SweepAxis axis_from_string(std::string_view s, const std::string& where) {
  if (s == "pause") return SweepAxis::Pause;
  if (s == "speed") return SweepAxis::Speed;
  if (s == "both") return SweepAxis::Both;
  throw ConfigError(where + ": invalid value for axis: '" + std::string(s) +
                    "' (expected pause, speed or both)");
}

// Grid-controlled scenario keys may not appear in a grid file; the grid sets
// them per cell.
const char* grid_controlled(std::string_view key) {
  if (key == "protocol") return "protocols";
  if (key == "traffic") return "traffics";
  if (key == "nodes") return "node_counts";
  if (key == "pause") return "pause_values or pinned_pause";
  if (key == "v_max") return "speed_values or pinned_speed";
  if (key == "seed") return "base_seed";
  return nullptr;
}

}  // namespace

void SweepGrid::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("grid: " + msg);
  };
  bool sweeps_pause = axis != SweepAxis::Speed;
  bool sweeps_speed = axis != SweepAxis::Pause;
  require(!sweeps_pause || !pause_values.empty(), "pause_values is empty");
  require(!sweeps_speed || !speed_values.empty(), "speed_values is empty");
  require(!node_counts.empty(), "node_counts is empty");
  require(!protocols.empty(), "protocols is empty");
  require(!traffics.empty(), "traffics is empty");
  require(seeds_per_cell >= 1, "seeds_per_cell must be >= 1");
  auto unique = [&require](const auto& v, const char* key) {
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        require(!(v[i] == v[j]), std::string("duplicate value in ") + key);
  };
  unique(pause_values, "pause_values");
  unique(speed_values, "speed_values");
  unique(node_counts, "node_counts");
  unique(protocols, "protocols");
  unique(traffics, "traffics");
  for (const SweepCell& cell : expand(*this)) {
    try {
      cell.config(*this, base_seed).validate();
    } catch (const ConfigError& e) {
      throw ConfigError("grid cell " + cell.id() + ": " + e.what());
    }
  }
}

SweepGrid parse_grid(std::istream& in, const std::string& origin) {
  SweepGrid grid;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string where = origin + " line " + std::to_string(lineno);
    std::string_view s = line;
    if (std::size_t hash = s.find('#'); hash != std::string_view::npos)
      s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError(where + ": expected key = value");
    std::string_view key = trim(s.substr(0, eq));
    std::string_view value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");

    if (const char* list_key = grid_controlled(key))
      throw ConfigError(where + ": the grid controls '" + std::string(key) +
                        "' per cell; set " + list_key + " instead");

    auto doubles = [&](std::vector<double>& out) {
      out.clear();
      for (std::string_view item : split(value, ','))
        out.push_back(parse_double_value(trim(item), key, where));
    };
    if (key == "axis") {
      grid.axis = axis_from_string(value, where);
    } else if (key == "pause_values") {
      doubles(grid.pause_values);
    } else if (key == "speed_values") {
      doubles(grid.speed_values);
    } else if (key == "pinned_pause") {
      grid.pinned_pause = parse_double_value(value, key, where);
    } else if (key == "pinned_speed") {
      grid.pinned_speed = parse_double_value(value, key, where);
    } else if (key == "node_counts") {
      grid.node_counts.clear();
      for (std::string_view item : split(value, ','))
        grid.node_counts.push_back(
            static_cast<int>(parse_int_value(trim(item), key, where)));
    } else if (key == "protocols") {
      grid.protocols.clear();
      for (std::string_view item : split(value, ','))
        grid.protocols.push_back(protocol_from_string(trim(item)));
    } else if (key == "traffics") {
      grid.traffics.clear();
      for (std::string_view item : split(value, ','))
        grid.traffics.push_back(traffic_from_string(trim(item)));
    } else if (key == "seeds_per_cell") {
      grid.seeds_per_cell =
          static_cast<int>(parse_int_value(value, key, where));
    } else if (key == "base_seed") {
      grid.base_seed =
          static_cast<std::uint64_t>(parse_int_value(value, key, where));
    } else if (!apply_config_entry(grid.base, key, value, where)) {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  grid.validate();
  return grid;
}

SweepGrid parse_grid_text(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  return parse_grid(in, origin);
}

SweepGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open grid file: " + path);
  return parse_grid(in, path);
}

std::string SweepCell::id() const {
  return std::string(sweep_kind_name(kind)) + format_g(value) + "-n" +
         std::to_string(nodes) + "-" + protocol_name(protocol) + "-" +
         traffic_name(traffic);
}

ScenarioConfig SweepCell::config(const SweepGrid& grid,
                                 std::uint64_t seed) const {
  ScenarioConfig cfg = grid.base;
  cfg.protocol = protocol;
  cfg.traffic = traffic;
  cfg.nodes = nodes;
  if (kind == SweepKind::Pause) {
    cfg.pause = value;
    cfg.v_max = grid.pinned_speed;
  } else {
    cfg.v_max = value;
    cfg.pause = grid.pinned_pause;
  }
  cfg.seed = seed;
  return cfg;
}

std::vector<SweepCell> expand(const SweepGrid& grid) {
  std::vector<SweepCell> cells;
  auto add_axis = [&](SweepKind kind, const std::vector<double>& values) {
    for (double value : values)
      for (int nodes : grid.node_counts)
        for (Protocol protocol : grid.protocols)
          for (TrafficKind traffic : grid.traffics)
            cells.push_back({kind, value, nodes, protocol, traffic});
  };
  if (grid.axis != SweepAxis::Speed)
    add_axis(SweepKind::Pause, grid.pause_values);
  if (grid.axis != SweepAxis::Pause)
    add_axis(SweepKind::Speed, grid.speed_values);
  return cells;
}

namespace {

struct RunRow {
  bool ok = false;
  std::string error;
  MetricsReport metrics;
};

constexpr char kCsvHeader[] =
    "scenario_id,protocol,traffic,nodes,pause,speed,seed,n_sent,n_received,"
    "pdr,lpr,avg_e2e_ms\n";

std::string csv_row(const SweepCell& cell, const ScenarioConfig& cfg,
                    const std::string& seed_field, double n_sent,
                    double n_received, double pdr, double lpr, double avg) {
  return cell.id() + "," + protocol_name(cell.protocol) + "," +
         traffic_name(cell.traffic) + "," + std::to_string(cell.nodes) + "," +
         format_g(cfg.pause) + "," + format_g(cfg.v_max) + "," + seed_field +
         "," + format_g(n_sent) + "," + format_g(n_received) + "," +
         format_metric(pdr) + "," + format_metric(lpr) + "," +
         format_metric(avg) + "\n";
}

// One median row per (axis value, density, protocol, traffic) cell.
struct MedianRow {
  SweepKind kind = SweepKind::Pause;
  double value = 0;
  int nodes = 0;
  Protocol protocol = Protocol::Aodv;
  TrafficKind traffic = TrafficKind::Cbr;
  double pdr = 0;
  double lpr = 0;
  double avg_e2e_ms = 0;
};

std::vector<MedianRow> parse_median_rows(const std::string& csv_text) {
  std::vector<MedianRow> rows;
  std::istringstream in(csv_text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (lineno == 1) {
      std::string_view want(kCsvHeader);
      want.remove_suffix(1);
      if (line != want)
        throw std::runtime_error("results csv line 1: unexpected header");
      continue;
    }
    auto fields = split(line, ',');
    if (fields.size() != 12)
      throw std::runtime_error("results csv line " + std::to_string(lineno) +
                               ": expected 12 fields, got " +
                               std::to_string(fields.size()));
    if (fields[6] != "median") continue;
    std::string where = "results csv line " + std::to_string(lineno);
    MedianRow row;
    std::string_view id = fields[0];
    if (id.starts_with("pause"))
      row.kind = SweepKind::Pause;
    else if (id.starts_with("speed"))
      row.kind = SweepKind::Speed;
    else
      throw std::runtime_error(where + ": scenario_id '" + std::string(id) +
                               "' does not start with pause or speed");
    row.protocol = protocol_from_string(fields[1]);
    row.traffic = traffic_from_string(fields[2]);
    row.nodes = static_cast<int>(parse_int_value(fields[3], "nodes", where));
    double pause = parse_double_value(fields[4], "pause", where);
    double speed = parse_double_value(fields[5], "speed", where);
    row.value = row.kind == SweepKind::Pause ? pause : speed;
    row.pdr = parse_double_value(fields[9], "pdr", where);
    row.lpr = parse_double_value(fields[10], "lpr", where);
    row.avg_e2e_ms = parse_double_value(fields[11], "avg_e2e_ms", where);
    rows.push_back(row);
  }
  return rows;
}

std::string regime_title(SweepKind kind, bool high_mobility, bool high_value,
                         int nodes, double value) {
  std::string title = high_mobility ? "High mobility, " : "Low mobility, ";
  title += high_value ? "high " : "low ";
  title += kind == SweepKind::Pause ? "pause time" : "speed";
  title += " (" + std::to_string(nodes) + " nodes, ";
  title += kind == SweepKind::Pause ? "pause " + format_g(value) + " s"
                                    : "speed " + format_g(value) + " m/s";
  title += "): PDR, E2E delay and LPR bands for TCP and CBR";
  return title;
}

std::string regime_id(SweepKind kind, bool high_mobility, bool high_value) {
  std::string id = high_mobility ? "high-mobility-" : "low-mobility-";
  id += high_value ? "high-" : "low-";
  id += kind == SweepKind::Pause ? "pause" : "speed";
  return id;
}

}  // namespace

DecisionTables build_tables_from_csv(const std::string& csv_text) {
  std::vector<MedianRow> rows = parse_median_rows(csv_text);
  DecisionTables tables;
  tables.csv = "regime_id,protocol,traffic,metric,band\n";
  for (SweepKind kind : {SweepKind::Pause, SweepKind::Speed}) {
    std::set<double> values;
    std::set<int> densities;
    for (const MedianRow& r : rows)
      if (r.kind == kind) {
        values.insert(r.value);
        densities.insert(r.nodes);
      }
    if (values.empty()) continue;
    for (bool high_mobility : {false, true}) {
      int nodes = high_mobility ? *densities.rbegin() : *densities.begin();
      for (bool high_value : {false, true}) {
        double value = high_value ? *values.rbegin() : *values.begin();
        std::vector<DecisionCell> cells;
        for (const MedianRow& r : rows) {
          if (r.kind != kind || r.nodes != nodes || r.value != value) continue;
          cells.push_back({r.protocol, r.traffic, MetricKind::Pdr,
                           classify_pdr(r.pdr)});
          cells.push_back({r.protocol, r.traffic, MetricKind::E2e,
                           classify_e2e(r.avg_e2e_ms, kind)});
          cells.push_back({r.protocol, r.traffic, MetricKind::Lpr,
                           classify_lpr(r.lpr, kind)});
        }
        if (cells.size() != 12) continue;
        std::string title =
            regime_title(kind, high_mobility, high_value, nodes, value);
        std::string id = regime_id(kind, high_mobility, high_value);
        if (!tables.text.empty()) tables.text += "\n";
        tables.text += render_decision_table_text(title, cells);
        tables.csv += render_decision_table_csv(id, cells);
      }
    }
  }
  return tables;
}

SweepOutcome run_sweep(const SweepGrid& grid, const SweepOptions& opts) {
  grid.validate();
  if (opts.jobs < 1) throw ConfigError("jobs must be >= 1");

  namespace fs = std::filesystem;
  fs::create_directories(opts.out_dir);
  if (opts.keep_traces) fs::create_directories(opts.out_dir + "/traces");

  std::vector<SweepCell> cells = expand(grid);
  struct RunSpec {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<RunSpec> specs;
  for (std::size_t c = 0; c < cells.size(); ++c)
    for (int s = 0; s < grid.seeds_per_cell; ++s)
      specs.push_back({c, grid.base_seed + static_cast<std::uint64_t>(s)});

  std::vector<RunRow> results(specs.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;

  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= specs.size()) return;
      const SweepCell& cell = cells[specs[i].cell];
      ScenarioConfig cfg = cell.config(grid, specs[i].seed);
      RunOutputs out;
      out.agt_and_drops_only = true;
      if (opts.keep_traces)
        out.trace_path = opts.out_dir + "/traces/" + cell.id() + "-s" +
                         std::to_string(specs[i].seed) + ".tr";
      RunRow& row = results[i];
      try {
        row.metrics = run_scenario(cfg, out).metrics;
        row.ok = true;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      std::size_t finished = done.fetch_add(1) + 1;
      if (!opts.quiet) {
        std::lock_guard<std::mutex> lock(log_mutex);
        std::fprintf(stderr, "[%zu/%zu] %s seed %llu%s%s\n", finished,
                     specs.size(), cell.id().c_str(),
                     static_cast<unsigned long long>(specs[i].seed),
                     row.ok ? "" : " FAILED: ",
                     row.ok ? "" : row.error.c_str());
      }
    }
  };

  if (opts.jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < opts.jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  SweepOutcome outcome;
  outcome.runs = static_cast<int>(specs.size());
  outcome.csv = kCsvHeader;
  std::size_t i = 0;
  for (const SweepCell& cell : cells) {
    std::vector<double> sent, received, pdr, lpr, avg;
    ScenarioConfig cfg = cell.config(grid, grid.base_seed);
    for (int s = 0; s < grid.seeds_per_cell; ++s, ++i) {
      const RunRow& row = results[i];
      if (!row.ok) {
        outcome.failures.push_back(cell.id() + " seed " +
                                   std::to_string(specs[i].seed) + ": " +
                                   row.error);
        continue;
      }
      const MetricsReport& m = row.metrics;
      outcome.csv += csv_row(cell, cfg, std::to_string(specs[i].seed),
                             static_cast<double>(m.n_sent),
                             static_cast<double>(m.n_received), m.pdr, m.lpr,
                             m.avg_e2e_ms);
      sent.push_back(static_cast<double>(m.n_sent));
      received.push_back(static_cast<double>(m.n_received));
      pdr.push_back(m.pdr);
      lpr.push_back(m.lpr);
      avg.push_back(m.avg_e2e_ms);
    }
    if (!pdr.empty())
      outcome.csv += csv_row(cell, cfg, "median", median(sent),
                             median(received), median(pdr), median(lpr),
                             median(avg));
  }

  DecisionTables tables = build_tables_from_csv(outcome.csv);
  outcome.tables_text = tables.text;
  outcome.tables_csv = tables.csv;

  auto write_file = [&](const std::string& name, const std::string& content) {
    std::ofstream f(opts.out_dir + "/" + name);
    if (!f)
      throw std::runtime_error("cannot write " + opts.out_dir + "/" + name);
    f << content;
  };
  write_file("results.csv", outcome.csv);
  write_file("tables.txt", outcome.tables_text);
  write_file("tables.csv", outcome.tables_csv);
  if (!outcome.failures.empty()) {
    std::string text;
    for (const std::string& f : outcome.failures) text += f + "\n";
    write_file("failures.txt", text);
  }
  return outcome;
}

}  // namespace vanet
