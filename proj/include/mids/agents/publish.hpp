#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mids/agents/registry.hpp"
#include "mids/agents/wire.hpp"
#include "mids/simnet/network.hpp"

namespace mids::agents {

using simnet::Tick;
using Bus = simnet::Network<WireMessage>;

struct DetectionPolicy {
  double tau = 0.5;
  Tick local_period = 1;   // same subdomain
  Tick remote_period = 10;  // adjacent subdomains; must exceed local_period

  // Throws InvalidArgument.
  void validate() const;
  Tick period(bool same_subdomain) const { return same_subdomain ? local_period : remote_period; }
};

struct Subscription {
  AgentId subscriber;
  AgentId publisher;
  std::vector<VarId> variables;
};

// Who listens to whom. Publication walks the subscriptions of one publisher
// and sends a BELIEF message to each subscriber whose period divides the
// tick.
class Subscriptions {
 public:
  explicit Subscriptions(const Registry& registry) : registry_(&registry) {}

  // Throws UnknownAgent if either side is not registered.
  void subscribe(const AgentId& subscriber, const AgentId& publisher, std::vector<VarId> variables);
  std::vector<const Subscription*> of_publisher(const AgentId& publisher) const;
  std::size_t size() const { return subs_.size(); }

  // Current posteriors of the publisher, restricted per subscription.
  using BeliefSource = std::function<std::vector<bayes::Posterior>(const AgentId&)>;
  // Returns how many messages were scheduled. Subscribers on isolated
  // hosts are skipped.
  std::size_t publish_beliefs(const AgentId& publisher, Tick tick, const DetectionPolicy& policy, Bus& bus,
                              const BeliefSource& beliefs) const;

 private:
  const Registry* registry_;
  std::vector<Subscription> subs_;
};

}  // namespace mids::agents
