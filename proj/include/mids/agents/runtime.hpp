#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mids/agents/alerts.hpp"
#include "mids/agents/publish.hpp"
#include "mids/detect/dataset.hpp"
#include "mids/msbn/msbn.hpp"

namespace mids::agents {

// Layout for k subnets on 2k hosts: subnet s has a monitoring agent and a
// primary intrusion-monitoring agent on host s, and a second monitoring
// agent with a standby intrusion-monitoring agent on host s + k. One record
// is processed per epoch of policy.remote_period ticks:
//   offset 1      monitoring agents start publishing the record's features
//                 (every local_period ticks, same host, no latency);
//                 intrusion agents reset and enter the evidence;
//   offsets 1..   linkage beliefs flow toward subnet 0 and back out, each
//                 sent by the active agent of a subnet to every live agent
//                 of the neighbouring subnet, and mirrored to its own peer;
//   offset E      every agent reads its class posterior, the active agent
//                 of subnet 0 applies the alert rule, then the trust round
//                 runs.
// A peer whose mirrored message differs from the one computed locally is
// reported in a TRUST message carrying the signed message as proof; every
// host that verifies the proof suspects the sender.
struct RuntimeConfig {
  DetectionPolicy policy;
  std::uint64_t key_seed = 1;
  std::size_t dtm_every = 1;  // epochs between trust rounds, plus any epoch with a suspicion
  std::optional<simnet::Compromise> compromise;
  bool literal_case_one = false;
};

struct EpochReport {
  std::size_t epoch = 0;
  std::uint64_t record = 0;
  simnet::Tick tick = 0;
  std::vector<AgentId> active;                      // per subnet
  std::vector<std::vector<double>> class_posterior;  // per subnet, from its active agent
};

struct Isolation {
  simnet::Tick tick = 0;
  HostId host = 0;
};

struct RuntimeReport {
  std::size_t hosts = 0;
  std::vector<EpochReport> epochs;
  std::vector<Alert> alerts;
  std::vector<Isolation> isolations;
  std::size_t suspicions = 0;
  std::string trace;
};

// Runs one epoch per row of `records`, whose features must match the
// network's. Throws InvalidArgument when the epoch is too short for the
// hypertree depth or there are fewer than two subnets.
RuntimeReport run_distributed(const msbn::Msbn& msbn, const detect::DiscreteDataset& records,
                              const RuntimeConfig& config);

// Tab-separated epoch, record, subnet, active agent, class posterior.
std::string format_epochs(const RuntimeReport& report);

}  // namespace mids::agents
