#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mids/agents/runtime.hpp"

namespace mids::testing {

// Train on three classes of the novelty generator, raise anomaly alerts on
// rows of the held-out class, confirm `confirmed` of them and rebuild the
// knowledgebase. Detection rates are over fresh rows of the held-out class.
struct NoveltyOutcome {
  double detection_before = 0;
  double anomaly_rate_before = 0;
  double detection_after = 0;
  double known_detection_after = 0;  // the three original classes, fresh rows
  std::size_t alerts = 0;
  std::size_t class_arity_before = 0;
  std::size_t class_arity_after = 0;
};
NoveltyOutcome novelty_experiment(std::uint64_t seed, std::size_t confirmed = 40, std::size_t min_records = 10);

// Five-subnet synthetic deployment run for `epochs` records, once clean and
// once with host `host` compromised at `tick`.
struct CompromiseOutcome {
  agents::RuntimeReport clean;
  agents::RuntimeReport attacked;
  agents::RuntimeReport replay;  // the attacked run again
  std::size_t first_clean_epoch = 0;  // first epoch after the isolation
  double max_gap_after = 0;  // largest class-posterior gap from that epoch on
};
CompromiseOutcome compromise_experiment(std::uint64_t seed, simnet::HostId host = 2, simnet::Tick tick = 50,
                                        std::size_t epochs = 20);

}  // namespace mids::testing
