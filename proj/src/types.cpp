#include "vanetsim/types.hpp"

#include <stdexcept>

namespace vanet {

const char* protocol_name(Protocol p) {
  return p == Protocol::Aodv ? "aodv" : "dsr";
}

const char* traffic_name(TrafficKind t) {
  return t == TrafficKind::Cbr ? "cbr" : "tcp";
}

Protocol protocol_from_string(std::string_view s) {
  if (s == "aodv") return Protocol::Aodv;
  if (s == "dsr") return Protocol::Dsr;
  throw std::runtime_error("unknown protocol '" + std::string(s) +
                           "' (expected aodv or dsr)");
}

TrafficKind traffic_from_string(std::string_view s) {
  if (s == "cbr") return TrafficKind::Cbr;
  if (s == "tcp") return TrafficKind::Tcp;
  throw std::runtime_error("unknown traffic type '" + std::string(s) +
                           "' (expected cbr or tcp)");
}

}  // namespace vanet
