#pragma once

// Agent messages travel as single text lines:
//
//   <TYPE> TAB <sender> TAB <recipient> TAB <timestamp> TAB <payload>
//
// TYPE is one of REGISTER LOOKUP QUERY SUBSCRIBE BELIEF ALERT TRUST; sender
// and recipient are agent ids (no whitespace); timestamp is a decimal tick;
// the payload is free text without tabs or newlines, by convention
// space-separated key=value fields.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mids/bayes/network.hpp"
#include "mids/bayes/potential.hpp"

namespace mids::agents {

using bayes::VarId;

enum class MessageType : std::uint8_t { Register, Lookup, Query, Subscribe, Belief, Alert, Trust };
std::string_view to_string(MessageType t);
// Throws MalformedLine.
MessageType parse_message_type(std::string_view s);

struct WireMessage {
  MessageType type = MessageType::Belief;
  std::string sender;
  std::string recipient;
  std::uint64_t timestamp = 0;
  std::string payload;

  bool operator==(const WireMessage&) const = default;
};

std::string format_wire(const WireMessage& m);
// Throws MalformedLine.
WireMessage parse_wire(std::string_view line);
// Used by the simulator trace.
inline std::string describe(const WireMessage& m) { return format_wire(m); }

// key=value fields of a payload, in order of appearance. Throws
// MalformedLine on a field without '='.
std::map<std::string, std::string> payload_fields(std::string_view payload);

// "v=<id>:p0,p1,..." per posterior, space-separated.
std::string encode_posteriors(const std::vector<bayes::Posterior>& posts);
std::vector<bayes::Posterior> decode_posteriors(std::string_view text);

// "vars=a,b ar=2,3 p=..." for a potential.
std::string encode_potential(const bayes::Potential& p);
bayes::Potential decode_potential(const std::map<std::string, std::string>& fields);

}  // namespace mids::agents
