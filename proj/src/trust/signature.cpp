#include "mids/trust/signature.hpp"

#include <algorithm>

#include "mids/common/rng.hpp"

namespace mids::trust {

std::uint64_t KeyRing::key(HostId host) const { return mix64(derive_seed(seed_, host)); }

std::uint64_t link_token(std::uint64_t key, std::uint64_t previous, StatusValue value, HostId host) {
  return mix64(key ^ mix64(previous ^ ((std::uint64_t{value} << 32) | host)));
}

bool SignedOrder::contains(HostId host) const {
  return std::any_of(chain.begin(), chain.end(), [&](const auto& l) { return l.host == host; });
}

std::uint64_t sign(const KeyRing& keys, HostId host, const SignedOrder& prefix) {
  const std::uint64_t previous = prefix.chain.empty() ? 0 : prefix.chain.back().token;
  return link_token(keys.key(host), previous, prefix.value, host);
}

SignedOrder countersign(const KeyRing& keys, const SignedOrder& order, HostId host) {
  SignedOrder out = order;
  out.chain.push_back({host, sign(keys, host, order)});
  return out;
}

SignedOrder originate(const KeyRing& keys, HostId leader, StatusValue value) {
  SignedOrder o{value, {}};
  return countersign(keys, o, leader);
}

bool verify(const KeyRing& keys, const SignedOrder& order) {
  if (order.chain.empty() || order.value > 1) return false;
  std::uint64_t previous = 0;
  for (std::size_t i = 0; i < order.chain.size(); ++i) {
    const auto& link = order.chain[i];
    for (std::size_t j = 0; j < i; ++j) {
      if (order.chain[j].host == link.host) return false;
    }
    if (link_token(keys.key(link.host), previous, order.value, link.host) != link.token) return false;
    previous = link.token;
  }
  return true;
}

}  // namespace mids::trust
