#include "mids/agents/registry.hpp"

#include <algorithm>

#include "mids/common/error.hpp"

namespace mids::agents {

std::string_view to_string(AgentKind k) {
  switch (k) {
    case AgentKind::SystemMonitoring: return "SystemMonitoring";
    case AgentKind::IntrusionMonitoring: return "IntrusionMonitoring";
    case AgentKind::Registry: return "Registry";
  }
  return "?";
}

void Registry::register_agent(const AgentDescriptor& d) {
  if (agents_.count(d.id)) throw Error(ErrorCode::DuplicateAgentId, "agent '" + d.id + "' is already registered");
  if (d.kind == AgentKind::Registry && !d.variables.empty()) {
    throw Error(ErrorCode::InvalidArgument, "registry agents monitor no variables");
  }
  agents_.emplace(d.id, d);
  order_.push_back(d.id);
  for (VarId v : d.variables) {
    auto& list = by_variable_[v];
    if (std::find(list.begin(), list.end(), d.id) == list.end()) list.push_back(d.id);
  }
}

std::vector<AgentLocation> Registry::lookup(VarId v) const {
  std::vector<AgentLocation> out;
  const auto it = by_variable_.find(v);
  if (it == by_variable_.end()) return out;
  for (const auto& id : it->second) out.push_back({id, agents_.at(id).host});
  return out;
}

const AgentDescriptor& Registry::descriptor(const AgentId& id) const {
  const auto it = agents_.find(id);
  if (it == agents_.end()) throw Error(ErrorCode::UnknownAgent, "agent '" + id + "' is not registered");
  return it->second;
}

std::vector<AgentId> Registry::remove_host(HostId host) {
  std::vector<AgentId> removed;
  for (const auto& id : order_) {
    if (agents_.at(id).host == host) removed.push_back(id);
  }
  for (const auto& id : removed) {
    agents_.erase(id);
    order_.erase(std::find(order_.begin(), order_.end(), id));
    for (auto& [v, list] : by_variable_) list.erase(std::remove(list.begin(), list.end(), id), list.end());
  }
  return removed;
}

}  // namespace mids::agents
