#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mids/bayes/network.hpp"
#include "mids/agents/wire.hpp"
#include "mids/simnet/network.hpp"

namespace mids::agents {

using AgentId = std::string;
using simnet::HostId;

enum class AgentKind : std::uint8_t { SystemMonitoring, IntrusionMonitoring, Registry };
std::string_view to_string(AgentKind k);

struct AgentDescriptor {
  AgentId id;
  HostId host = 0;
  std::uint32_t subnet = 0;
  AgentKind kind = AgentKind::SystemMonitoring;
  std::vector<VarId> variables;  // monitored; empty for registry agents
};

struct AgentLocation {
  AgentId agent;
  HostId host = 0;

  bool operator==(const AgentLocation&) const = default;
};

class Registry {
 public:
  // Throws DuplicateAgentId, InvalidArgument (a registry agent listing
  // variables).
  void register_agent(const AgentDescriptor& d);
  // Agents monitoring `v`, in registration order; empty if none.
  std::vector<AgentLocation> lookup(VarId v) const;
  // Throws UnknownAgent.
  const AgentDescriptor& descriptor(const AgentId& id) const;
  bool contains(const AgentId& id) const { return agents_.count(id) != 0; }
  // Drops every agent on `host` (after isolation); returns the ids removed.
  std::vector<AgentId> remove_host(HostId host);
  const std::map<AgentId, AgentDescriptor>& agents() const { return agents_; }

 private:
  std::map<AgentId, AgentDescriptor> agents_;
  std::vector<AgentId> order_;
  std::map<VarId, std::vector<AgentId>> by_variable_;
};

}  // namespace mids::agents
