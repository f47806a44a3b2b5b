#include "vanetsim/classify.hpp"

#include <array>
#include <optional>
#include <stdexcept>

namespace vanet {

const char* band_name(Band b) {
  switch (b) {
    case Band::Low: return "Low";
    case Band::Average: return "Avg";
    case Band::High: return "High";
  }
  return "?";
}

const char* metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::Pdr: return "PDR";
    case MetricKind::E2e: return "E2E";
    case MetricKind::Lpr: return "LPR";
  }
  return "?";
}

const char* sweep_kind_name(SweepKind k) {
  return k == SweepKind::Pause ? "pause" : "speed";
}

SweepKind sweep_kind_from_string(std::string_view s) {
  if (s == "pause") return SweepKind::Pause;
  if (s == "speed") return SweepKind::Speed;
  throw std::runtime_error("unknown sweep kind '" + std::string(s) +
                           "' (expected pause or speed)");
}

Band classify_pdr(double pdr) {
  if (pdr >= 98.0) return Band::High;
  if (pdr >= 96.0) return Band::Average;
  return Band::Low;
}

Band classify_e2e(double ms, SweepKind k) {
  if (k == SweepKind::Pause) {
    if (ms >= 351.0) return Band::High;
    if (ms >= 151.0) return Band::Average;
    return Band::Low;
  }
  if (ms >= 150.0) return Band::High;
  if (ms >= 51.0) return Band::Average;
  return Band::Low;
}

Band classify_lpr(double lpr, SweepKind k) {
  if (k == SweepKind::Pause) {
    if (lpr > 2.0) return Band::High;
    if (lpr >= 1.0) return Band::Average;
    return Band::Low;
  }
  if (lpr > 3.0) return Band::High;
  if (lpr >= 1.5) return Band::Average;
  return Band::Low;
}

BandReport classify(const MetricsReport& report, SweepKind k) {
  return BandReport{classify_pdr(report.pdr), classify_e2e(report.avg_e2e_ms, k),
                    classify_lpr(report.lpr, k)};
}

namespace {

constexpr std::array<Protocol, 2> kProtocols{Protocol::Aodv, Protocol::Dsr};
constexpr std::array<MetricKind, 3> kMetrics{MetricKind::Pdr, MetricKind::E2e,
                                             MetricKind::Lpr};
constexpr std::array<TrafficKind, 2> kTraffics{TrafficKind::Tcp,
                                               TrafficKind::Cbr};

Band cell_band(const std::vector<DecisionCell>& cells, Protocol p,
               TrafficKind t, MetricKind m) {
  std::optional<Band> found;
  for (const DecisionCell& c : cells)
    if (c.protocol == p && c.traffic == t && c.metric == m) found = c.band;
  if (!found)
    throw std::runtime_error(std::string("incomplete decision table: missing "
                                         "cell (") +
                             protocol_name(p) + ", " + traffic_name(t) + ", " +
                             metric_name(m) + ")");
  return *found;
}

}  // namespace

std::string render_decision_table_text(
    const std::string& title, const std::vector<DecisionCell>& cells) {
  std::string out = title + "\n";
  out += "Protocol  PDR/TCP  PDR/CBR  E2E/TCP  E2E/CBR  LPR/TCP  LPR/CBR\n";
  for (Protocol p : kProtocols) {
    std::string row = p == Protocol::Aodv ? "AODV    " : "DSR     ";
    for (MetricKind m : kMetrics)
      for (TrafficKind t : kTraffics) {
        std::string b = band_name(cell_band(cells, p, t, m));
        b.resize(7, ' ');
        row += "  " + b;
      }
    while (!row.empty() && row.back() == ' ') row.pop_back();
    out += row + "\n";
  }
  return out;
}

std::string render_decision_table_csv(
    const std::string& regime_id, const std::vector<DecisionCell>& cells) {
  std::string out;
  for (Protocol p : kProtocols)
    for (TrafficKind t : kTraffics)
      for (MetricKind m : kMetrics)
        out += regime_id + "," + protocol_name(p) + "," + traffic_name(t) +
               "," + metric_name(m) + "," +
               band_name(cell_band(cells, p, t, m)) + "\n";
  return out;
}

}  // namespace vanet
