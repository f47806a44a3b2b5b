#pragma once

#include <string>
#include <string_view>

namespace vanet {

enum class Protocol { Aodv, Dsr };
enum class TrafficKind { Cbr, Tcp };

const char* protocol_name(Protocol p);
const char* traffic_name(TrafficKind t);
Protocol protocol_from_string(std::string_view s);     // throws on unknown
TrafficKind traffic_from_string(std::string_view s);   // throws on unknown

}  // namespace vanet
