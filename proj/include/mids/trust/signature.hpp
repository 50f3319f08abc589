#pragma once

#include <cstdint>
#include <vector>

namespace mids::trust {

using HostId = std::uint32_t;
using StatusValue = std::uint8_t;  // 0 safe, 1 compromised

// Simulated per-host secret keys. Only the simulator holds a KeyRing.
class KeyRing {
 public:
  explicit KeyRing(std::uint64_t seed = 1) : seed_(seed) {}
  std::uint64_t key(HostId host) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Keyed digest of one chain link over the value, the previous link's token
// (0 for the first link) and the signing host.
std::uint64_t link_token(std::uint64_t key, std::uint64_t previous, StatusValue value, HostId host);

struct SignatureLink {
  HostId host = 0;
  std::uint64_t token = 0;

  bool operator==(const SignatureLink&) const = default;
};

struct SignedOrder {
  StatusValue value = 0;
  std::vector<SignatureLink> chain;  // chain[0] is the instance leader

  bool contains(HostId host) const;
  bool operator==(const SignedOrder&) const = default;
};

// Token `host` would append to `prefix`.
std::uint64_t sign(const KeyRing& keys, HostId host, const SignedOrder& prefix);
// Copy of `order` countersigned by `host`.
SignedOrder countersign(const KeyRing& keys, const SignedOrder& order, HostId host);
SignedOrder originate(const KeyRing& keys, HostId leader, StatusValue value);
// True iff the chain is nonempty, has no repeated host, and every token
// recomputes.
bool verify(const KeyRing& keys, const SignedOrder& order);

}  // namespace mids::trust
