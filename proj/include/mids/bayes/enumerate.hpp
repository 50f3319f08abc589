#pragma once

#include <cstdint>
#include <vector>

#include "mids/bayes/network.hpp"

namespace mids::bayes {

inline constexpr std::uint64_t kDefaultEnumerationCap = std::uint64_t{1} << 22;

// Exact P(target | e) by summing the joint over every assignment consistent
// with e. Ground truth for the junction-tree code; deliberately naive.
// Throws StateSpaceTooLarge, ZeroProbabilityEvidence.
Posterior brute_force_posterior(const BayesNet& net, VarId target, const Evidence& e,
                                std::uint64_t cap = kDefaultEnumerationCap);

// All single-variable posteriors from one enumeration pass.
std::vector<Posterior> brute_force_marginals(const BayesNet& net, const Evidence& e,
                                             std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace mids::bayes
