#pragma once

#include <cstddef>
#include <vector>

#include "mids/bayes/junction_tree.hpp"
#include "mids/msbn/msbn.hpp"

namespace mids::msbn {

// Each d-sepset is made complete in both local moral graphs, so a linkage
// tree is the single cluster equal to the d-sepset.
struct Linkage {
  SubnetId a = 0;
  SubnetId b = 0;
  std::vector<VarId> vars;
  // Last belief passed over this link, in either direction.
  bayes::Potential potential;
};

struct SubnetEvidence {
  SubnetId subnet = 0;
  bayes::Evidence evidence;
};

// One local junction tree per subnet plus the linkages between them. Every
// mutating operation either completes or leaves the forest unchanged.
class LinkedJunctionForest {
 public:
  const Msbn& msbn() const { return msbn_; }
  const bayes::JunctionTree& local(SubnetId id) const;
  const std::vector<Linkage>& linkages() const { return linkages_; }
  const Linkage& linkage(SubnetId a, SubnetId b) const;
  const bayes::Evidence& evidence(SubnetId id) const;

  // Posteriors of every subnet variable, ascending by id, from local state
  // plus `extra` only. Sends nothing.
  std::vector<bayes::Posterior> local_inference(SubnetId id, const bayes::Evidence& extra = {}) const;
  bayes::Posterior local_posterior(SubnetId id, VarId v) const;

  // Stores evidence in the subnet and recalibrates it locally. Throws
  // UnknownVariable for variables outside the subnet.
  void enter_evidence(const SubnetEvidence& e);

  // Belief over the d-sepset as `from` currently sees it.
  bayes::Potential linkage_message(SubnetId from, SubnetId to) const;
  // `to` absorbs a message from `from`: divides out the last linkage belief,
  // multiplies the ratio in and recalibrates.
  void absorb_message(SubnetId from, SubnetId to, const bayes::Potential& message);
  // Sender side of a message when each agent keeps its own forest copy:
  // remembers `message` as the last belief passed over the link.
  void record_sent(SubnetId from, SubnetId to, const bayes::Potential& message);
  // linkage_message + absorb_message. Throws NotAdjacent.
  void communicate_belief(SubnetId from, SubnetId to);
  // Collect toward the lowest subnet id, then distribute back out.
  void full_communication();
  std::size_t messages_sent() const { return messages_; }

  // Drops all evidence and returns to the state right after compilation.
  void reset();

  friend LinkedJunctionForest compile_ljf(const Msbn&);

 private:
  std::size_t link_index(SubnetId a, SubnetId b) const;

  Msbn msbn_;
  std::vector<bayes::JunctionTree> locals_;
  std::vector<bayes::JunctionTree> pristine_;
  std::vector<bayes::Evidence> evidence_;
  std::vector<Linkage> linkages_;
  std::vector<Linkage> pristine_linkages_;
  std::size_t messages_ = 0;
};

LinkedJunctionForest compile_ljf(const Msbn& msbn);

}  // namespace mids::msbn
