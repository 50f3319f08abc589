#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mids/common/rng.hpp"
#include "mids/trust/signature.hpp"

namespace mids::trust {

inline constexpr std::size_t kMaxHosts = 32;
using HostMask = std::uint32_t;

inline constexpr HostMask host_bit(HostId h) { return HostMask{1} << h; }

struct Behavior {
  enum class Kind : std::uint8_t { Honest, Silent, ConstantLie, SplitSend, DropRelay };

  Kind kind = Kind::Honest;
  StatusValue value = 0;        // ConstantLie
  HostMask ones = 0;            // SplitSend: recipients sent 1 (others 0)
  HostMask skip = 0;            // SplitSend: recipients sent nothing
  double drop_probability = 0;  // DropRelay
  std::uint64_t seed = 0;       // DropRelay

  static Behavior honest() { return {}; }
  static Behavior silent() { return {Kind::Silent}; }
  static Behavior lie(StatusValue v) { return {Kind::ConstantLie, v}; }
  static Behavior split(HostMask ones, HostMask skip = 0) { return {Kind::SplitSend, 0, ones, skip}; }
  static Behavior drop(double p, std::uint64_t seed) { return {Kind::DropRelay, 0, 0, 0, p, seed}; }

  bool traitor() const { return kind != Kind::Honest; }
  bool operator==(const Behavior&) const = default;
};

// honest | silent | lie <v> | split <host>:<v|-> ... | drop <p> <seed>
// In `split`, recipients not listed get nothing.
Behavior parse_behavior(std::string_view text);
std::string to_string(const Behavior& b);

enum class Choice : std::uint8_t { LeaderSilent, LeaderReportsSafe, LeaderReportsCompromised, LeaderContradictory };

// Value sets are bitmasks: bit 0 = received '0', bit 1 = received '1'.
Choice choice(std::uint8_t values);
std::string_view to_string(Choice c);

enum class Delivery : std::uint8_t { Accepted, Duplicate, InvalidSignatureDropped, Rejected, IsolatedDropped };
std::string_view to_string(Delivery d);

struct TraceEvent {
  std::uint32_t round = 0;
  HostId sender = 0;
  HostId recipient = 0;
  StatusValue value = 0;
  std::uint32_t chain_length = 0;
  Delivery outcome = Delivery::Accepted;

  bool operator==(const TraceEvent&) const = default;
};

// Tab-separated: instance round sender recipient value chain outcome
std::string format_trace_line(HostId instance, const TraceEvent& e);

struct SmaConfig {
  std::size_t hosts = 0;
  HostId leader = 0;
  StatusValue leader_value = 0;
  std::vector<Behavior> behaviors;  // one per host
  HostMask isolated = 0;
  std::uint64_t key_seed = 1;
};

struct SmaResult {
  std::vector<std::uint8_t> values;  // per host
  std::size_t messages = 0;
  std::size_t invalid_dropped = 0;
  std::size_t isolated_dropped = 0;
  // False if some accepted chain carries an entry for an honest host that the
  // host did not produce itself.
  bool unforgeable = true;

  Choice decision(HostId h) const { return choice(values[h]); }
};

// Synchronous signed-message agreement over `hosts` rounds. In round r each
// host accepts only chains of r + 1 valid signatures that start with the
// leader, end with the sender and do not contain the receiver; each distinct
// value is countersigned and relayed once, to every host not on its chain.
// Reuse one engine for many runs to avoid reallocations.
class SmaEngine {
 public:
  const SmaResult& run(const SmaConfig& config, std::vector<TraceEvent>* trace = nullptr);

 private:
  struct Node {
    std::uint64_t token;
    std::uint32_t parent;
    HostMask mask;
    std::uint8_t host;
    std::uint8_t creator;
    std::uint8_t value;
    std::uint8_t length;
    bool valid;
  };
  struct Message {
    std::uint32_t node;
    std::uint8_t from;
    std::uint8_t to;
  };
  struct Pending {
    std::uint32_t node;
    std::uint8_t host;
  };

  std::uint32_t make_node(std::uint32_t parent, HostId host, StatusValue value);
  void send(HostId from, HostId to, std::uint32_t node);
  void originate(const SmaConfig& c);
  void relay(const SmaConfig& c, const Pending& p);
  void deliver(const SmaConfig& c, const Message& m, std::uint32_t round, std::vector<TraceEvent>* trace);

  std::array<std::uint64_t, kMaxHosts> keys_{};
  std::uint64_t keys_seed_ = 0;
  std::size_t keys_count_ = 0;
  std::vector<Node> nodes_;
  std::vector<Message> outbox_;
  std::vector<Pending> pending_;
  std::vector<Pending> next_pending_;
  std::vector<Rng> drop_rngs_;
  std::vector<int> drop_index_;
  SmaResult result_;
};

SmaResult run_sma(const SmaConfig& config, std::vector<TraceEvent>* trace = nullptr);

}  // namespace mids::trust
