#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mids/agents/alerts.hpp"
#include "mids/detect/dataset.hpp"
#include "mids/msbn/ljf.hpp"

namespace mids::agents {

struct Deliberation {
  std::vector<bayes::Posterior> posteriors;  // every subnet variable
  std::vector<double> class_posterior;
  detect::Decision decision;
  std::optional<Alert> alert;
};

// Enters `evidence` into the agent's subnet, runs local inference there and
// applies the alert rule to the class variable, which the subnet must hold.
Deliberation deliberate(msbn::LinkedJunctionForest& ljf, msbn::SubnetId subnet, const bayes::Evidence& evidence,
                        double tau, const AgentId& agent, std::uint64_t timestamp);

inline constexpr std::size_t kDefaultMinConfirmed = 10;

struct Knowledgebase {
  bayes::BayesNet net;
  msbn::Msbn msbn;
  detect::DiscreteDataset training;
};

// Adds `new_class` as one more state of the class variable, refits every
// CPT on the prior training rows plus the confirmed rows, and re-sections
// with the same subnet variable sets. Throws TooFewConfirmedRecords,
// InvalidArgument (class already known).
Knowledgebase update_knowledgebase(const Knowledgebase& kb, const std::string& new_class,
                                   const std::vector<std::vector<std::uint16_t>>& confirmed_rows,
                                   std::size_t min_records = kDefaultMinConfirmed, double alpha = 1.0);

}  // namespace mids::agents
