#include "mids/agents/publish.hpp"

#include <algorithm>

#include "mids/common/error.hpp"

namespace mids::agents {

void DetectionPolicy::validate() const {
  if (!(tau > 0 && tau < 1)) throw Error(ErrorCode::InvalidArgument, "threshold must lie in (0, 1)");
  if (local_period == 0) throw Error(ErrorCode::InvalidArgument, "local publish period must be positive");
  if (remote_period <= local_period) {
    throw Error(ErrorCode::InvalidArgument, "inter-subdomain period must exceed the local period");
  }
}

void Subscriptions::subscribe(const AgentId& subscriber, const AgentId& publisher, std::vector<VarId> variables) {
  registry_->descriptor(subscriber);
  registry_->descriptor(publisher);
  std::sort(variables.begin(), variables.end());
  subs_.push_back({subscriber, publisher, std::move(variables)});
}

std::vector<const Subscription*> Subscriptions::of_publisher(const AgentId& publisher) const {
  std::vector<const Subscription*> out;
  for (const auto& s : subs_) {
    if (s.publisher == publisher) out.push_back(&s);
  }
  return out;
}

std::size_t Subscriptions::publish_beliefs(const AgentId& publisher, Tick tick, const DetectionPolicy& policy,
                                           Bus& bus, const BeliefSource& beliefs) const {
  const auto& pub = registry_->descriptor(publisher);
  if (bus.is_isolated(pub.host)) return 0;
  std::size_t sent = 0;
  std::vector<bayes::Posterior> current;
  bool fetched = false;
  for (const auto* s : of_publisher(publisher)) {
    if (!registry_->contains(s->subscriber)) continue;
    const auto& sub = registry_->descriptor(s->subscriber);
    if (bus.is_isolated(sub.host)) continue;
    if (tick % policy.period(sub.subnet == pub.subnet) != 0) continue;
    if (!fetched) {
      current = beliefs(publisher);
      fetched = true;
    }
    std::vector<bayes::Posterior> selected;
    for (const auto& p : current) {
      if (std::binary_search(s->variables.begin(), s->variables.end(), p.variable)) selected.push_back(p);
    }
    bus.schedule(pub.host, sub.host,
                 WireMessage{MessageType::Belief, publisher, s->subscriber, tick, encode_posteriors(selected)});
    ++sent;
  }
  return sent;
}

}  // namespace mids::agents
