#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "vanetsim/metrics.hpp"
#include "vanetsim/scenario.hpp"
#include "vanetsim/simulation.hpp"
#include "vanetsim/sweep.hpp"

namespace {

void print_metrics(const vanet::MetricsReport& m) {
  std::printf("sent packets:      %ld\n", m.n_sent);
  std::printf("received packets:  %ld\n", m.n_received);
  std::printf("delivery ratio:    %.6f %%\n", m.pdr);
  std::printf("loss ratio:        %.6f %%\n", m.lpr);
  std::printf("avg e2e delay:     %.6f ms (%ld packets)\n", m.avg_e2e_ms,
              m.delay_count);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic ad-hoc routing simulator and trace analyzer"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out;
  bool quiet = false;
  app.add_option("--seed", seed, "override the config's seed (sweep: base seed)");
  app.add_option("--out", out,
                 "output path (run: trace file; sweep/table: directory)");
  app.add_flag("--quiet", quiet, "suppress progress and informational output");

  auto* run = app.add_subcommand("run", "run one scenario from a config file");
  run->fallthrough();
  std::string config_path;
  std::string schedule_path;
  run->add_option("config", config_path, "scenario config file")->required();
  run->add_option("--schedule", schedule_path,
                  "also write the motion schedule to this file");

  auto* analyze =
      app.add_subcommand("analyze", "compute metrics from an existing trace");
  analyze->fallthrough();
  std::string trace_path;
  std::string type_str;
  bool script_compat = false;
  analyze->add_option("trace", trace_path, "trace file")->required();
  analyze->add_option("--type", type_str, "data packet type: cbr or tcp")
      ->required();
  analyze->add_flag("--script-compat", script_compat,
                    "reproduce the reference awk scripts, quirks included");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "run a parameter sweep from a grid file");
  sweep_cmd->fallthrough();
  std::string grid_path;
  int jobs = 1;
  bool keep_traces = false;
  sweep_cmd->add_option("grid", grid_path, "sweep grid file")->required();
  sweep_cmd->add_option("--jobs", jobs, "parallel simulation threads")
      ->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--keep-traces", keep_traces,
                      "keep per-run trace files under <out>/traces");

  auto* table = app.add_subcommand(
      "table", "render decision tables from sweep results");
  table->fallthrough();
  std::string csv_path;
  table->add_option("csv", csv_path, "results.csv from a sweep")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      vanet::ScenarioConfig cfg = vanet::load_config(config_path);
      if (seed) cfg.seed = *seed;
      vanet::RunOutputs outputs;
      outputs.trace_path = out.empty() ? "out.tr" : out;
      outputs.schedule_path = schedule_path;
      vanet::RunResult result = vanet::run_scenario(cfg, outputs);
      if (!quiet)
        std::fprintf(stderr, "trace written to %s (%zu records, %zu events)\n",
                     outputs.trace_path.c_str(), result.trace_records,
                     result.events);
      print_metrics(result.metrics);
    } else if (*analyze) {
      auto records = vanet::parse_trace_file(trace_path);
      vanet::TrafficKind kind = vanet::traffic_from_string(type_str);
      vanet::PktType type = kind == vanet::TrafficKind::Cbr
                                ? vanet::PktType::Cbr
                                : vanet::PktType::Tcp;
      vanet::MetricsReport report =
          script_compat ? vanet::compute_metrics_script_compat(records, type)
                        : vanet::compute_metrics(records, type);
      print_metrics(report);
    } else if (*sweep_cmd) {
      vanet::SweepGrid grid = vanet::load_grid(grid_path);
      if (seed) grid.base_seed = *seed;
      vanet::SweepOptions opts;
      opts.out_dir = out.empty() ? "sweep-out" : out;
      opts.jobs = jobs;
      opts.keep_traces = keep_traces;
      opts.quiet = quiet;
      vanet::SweepOutcome outcome = vanet::run_sweep(grid, opts);
      if (!quiet) {
        std::fputs(outcome.tables_text.c_str(), stdout);
        std::fprintf(stderr, "%d runs; results under %s\n", outcome.runs,
                     opts.out_dir.c_str());
      }
      if (!outcome.failures.empty()) {
        std::fprintf(stderr, "%zu runs failed (see %s/failures.txt)\n",
                     outcome.failures.size(), opts.out_dir.c_str());
        return 1;
      }
    } else if (*table) {
      vanet::DecisionTables tables =
          vanet::build_tables_from_csv(read_file(csv_path));
      std::fputs(tables.text.c_str(), stdout);
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream txt(out + "/tables.txt");
        std::ofstream csv(out + "/tables.csv");
        if (!txt || !csv)
          throw std::runtime_error("cannot write tables under " + out);
        txt << tables.text;
        csv << tables.csv;
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
