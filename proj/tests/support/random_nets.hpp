#pragma once

#include <cstddef>

#include "mids/bayes/network.hpp"
#include "mids/common/rng.hpp"

namespace mids::testing {

struct RandomNetOptions {
  std::size_t variables = 8;
  std::size_t max_parents = 3;
  std::size_t min_arity = 2;
  std::size_t max_arity = 2;
  // Every non-root (in topological order) gets at least one parent.
  bool connected = false;
  // Ids are a random permutation of the topological order.
  bool shuffle_ids = true;
  // Lower bound on raw CPT weights before normalization; > 0 keeps every entry positive.
  double min_weight = 0.05;
};

bayes::BayesNet random_net(Rng& rng, const RandomNetOptions& options);
bayes::Evidence random_evidence(Rng& rng, const bayes::BayesNet& net, std::size_t count);
// A -> B with P(A=1) = 0.3, P(B=1|A=1) = 0.9, P(B=1|A=0) = 0.2.
bayes::BayesNet two_node_net();

}  // namespace mids::testing

#include "mids/msbn/msbn.hpp"

namespace mids::testing {

// Cuts `cuts` random edges of the net's junction tree and uses the resulting
// connected cluster groups as subnets. Unsound results are rejected and
// redrawn; falls back to a single subnet after `attempts` tries.
msbn::Msbn random_sectioning(Rng& rng, const bayes::BayesNet& net, std::size_t cuts,
                             std::size_t attempts = 50);

}  // namespace mids::testing
