#include "mids/agents/knowledge.hpp"

#include <algorithm>

#include "mids/common/error.hpp"
#include "mids/detect/learn.hpp"

namespace mids::agents {

Deliberation deliberate(msbn::LinkedJunctionForest& ljf, msbn::SubnetId subnet, const bayes::Evidence& evidence,
                        double tau, const AgentId& agent, std::uint64_t timestamp) {
  const auto& m = ljf.msbn();
  if (!m.contains(subnet, detect::kClassVar)) {
    throw Error(ErrorCode::UnknownVariable, "subnet " + std::to_string(subnet) + " does not hold the class variable");
  }
  ljf.enter_evidence({subnet, evidence});
  Deliberation d;
  d.posteriors = ljf.local_inference(subnet);
  for (const auto& p : d.posteriors) {
    if (p.variable == detect::kClassVar) d.class_posterior = p.probabilities;
  }
  const auto& classes = m.net().variable(detect::kClassVar).states;
  d.decision = detect::decide(d.class_posterior, detect::normal_index(classes), tau);
  d.alert = make_alert(d.decision, d.class_posterior, classes, agent, timestamp);
  return d;
}

Knowledgebase update_knowledgebase(const Knowledgebase& kb, const std::string& new_class,
                                   const std::vector<std::vector<std::uint16_t>>& confirmed_rows,
                                   std::size_t min_records, double alpha) {
  if (confirmed_rows.size() < std::max<std::size_t>(min_records, 1)) {
    throw Error(ErrorCode::TooFewConfirmedRecords, std::to_string(confirmed_rows.size()) + " confirmed record(s) for '" +
                                                       new_class + "', need " + std::to_string(min_records));
  }
  auto classes = kb.net.variable(detect::kClassVar).states;
  if (std::find(classes.begin(), classes.end(), new_class) != classes.end()) {
    throw Error(ErrorCode::InvalidArgument, "class '" + new_class + "' already exists");
  }
  classes.push_back(new_class);

  Knowledgebase out;
  out.training = kb.training;
  out.training.classes = classes;
  const auto label = static_cast<std::uint16_t>(classes.size() - 1);
  std::uint64_t next_id = 0;
  for (auto id : kb.training.ids) next_id = std::max(next_id, id + 1);
  for (const auto& row : confirmed_rows) out.training.add_row(row, label, next_id++);

  // Same DAG, one more class state; placeholder uniform tables sized anew.
  bayes::BayesNet dag = kb.net;
  dag.set_states(detect::kClassVar, classes);
  for (const auto& v : dag.variables()) {
    const auto parents = dag.cpt(v.id).parents;
    std::size_t rows = 1;
    for (auto p : parents) rows *= dag.arity(p);
    dag.set_cpt(v.id, parents, std::vector<double>(rows * v.arity(), 1.0 / static_cast<double>(v.arity())));
  }
  out.net = detect::fit_cpts(std::move(dag), out.training, alpha);
  out.msbn = msbn::section_network(out.net, kb.msbn.subnets());
  return out;
}

}  // namespace mids::agents
