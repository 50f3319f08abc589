#include "mids/msbn/ljf.hpp"

#include <algorithm>
#include <functional>

#include "mids/bayes/graph.hpp"
#include "mids/kernels/kernels.hpp"

namespace mids::msbn {

const bayes::JunctionTree& LinkedJunctionForest::local(SubnetId id) const {
  msbn_.subnet(id);
  return locals_[id];
}

const bayes::Evidence& LinkedJunctionForest::evidence(SubnetId id) const {
  msbn_.subnet(id);
  return evidence_[id];
}

std::size_t LinkedJunctionForest::link_index(SubnetId a, SubnetId b) const {
  if (a > b) std::swap(a, b);
  for (std::size_t i = 0; i < linkages_.size(); ++i) {
    if (linkages_[i].a == a && linkages_[i].b == b) return i;
  }
  throw Error(ErrorCode::NotAdjacent,
              "subnets " + std::to_string(a) + " and " + std::to_string(b) + " are not linked");
}

const Linkage& LinkedJunctionForest::linkage(SubnetId a, SubnetId b) const {
  return linkages_[link_index(a, b)];
}

std::vector<bayes::Posterior> LinkedJunctionForest::local_inference(SubnetId id,
                                                                    const bayes::Evidence& extra) const {
  const auto& spec = msbn_.subnet(id);
  for (const auto& [v, s] : extra) {
    if (!msbn_.contains(id, v)) {
      throw Error(ErrorCode::UnknownVariable, "variable " + std::to_string(v) + " is not in subnet " + std::to_string(id));
    }
    if (s >= msbn_.net().arity(v)) throw Error(ErrorCode::ArityMismatch, "evidence state out of range");
  }
  bayes::JunctionTree jt = locals_[id];
  if (!extra.empty()) {
    jt.enter_evidence(extra);
    jt.calibrate();
  }
  std::vector<bayes::Posterior> out;
  out.reserve(spec.variables.size());
  for (VarId v : spec.variables) out.push_back(bayes::query_posterior(jt, v));
  return out;
}

bayes::Posterior LinkedJunctionForest::local_posterior(SubnetId id, VarId v) const {
  if (!msbn_.contains(id, v)) {
    throw Error(ErrorCode::UnknownVariable, "variable " + std::to_string(v) + " is not in subnet " + std::to_string(id));
  }
  return bayes::query_posterior(locals_[id], v);
}

void LinkedJunctionForest::enter_evidence(const SubnetEvidence& e) {
  msbn_.subnet(e.subnet);
  for (const auto& [v, s] : e.evidence) {
    if (!msbn_.contains(e.subnet, v)) {
      throw Error(ErrorCode::UnknownVariable,
                  "variable " + std::to_string(v) + " is not in subnet " + std::to_string(e.subnet));
    }
    if (s >= msbn_.net().arity(v)) throw Error(ErrorCode::ArityMismatch, "evidence state out of range");
  }
  bayes::JunctionTree jt = locals_[e.subnet];
  jt.enter_evidence(e.evidence);
  jt.calibrate();
  locals_[e.subnet] = std::move(jt);
  for (const auto& [v, s] : e.evidence) evidence_[e.subnet].set(v, s);
}

bayes::Potential LinkedJunctionForest::linkage_message(SubnetId from, SubnetId to) const {
  const auto& link = linkages_[link_index(from, to)];
  msbn_.subnet(from);
  return locals_[from].marginal(link.vars);
}

void LinkedJunctionForest::absorb_message(SubnetId from, SubnetId to, const bayes::Potential& message) {
  const auto li = link_index(from, to);
  auto& link = linkages_[li];
  if (message.vars() != link.vars || message.size() != link.potential.size()) {
    throw Error(ErrorCode::InvalidArgument, "message scope does not match the linkage");
  }
  bayes::Potential ratio = message;
  kernels::divide_guarded(ratio.values(), message.values(), link.potential.values());
  bayes::JunctionTree jt = locals_[to];
  jt.absorb(ratio);
  jt.calibrate();
  locals_[to] = std::move(jt);
  link.potential = message;
  ++messages_;
}

void LinkedJunctionForest::record_sent(SubnetId from, SubnetId to, const bayes::Potential& message) {
  auto& link = linkages_[link_index(from, to)];
  if (message.vars() != link.vars || message.size() != link.potential.size()) {
    throw Error(ErrorCode::InvalidArgument, "message scope does not match the linkage");
  }
  link.potential = message;
}

void LinkedJunctionForest::communicate_belief(SubnetId from, SubnetId to) {
  absorb_message(from, to, linkage_message(from, to));
}

void LinkedJunctionForest::full_communication() {
  std::vector<std::pair<SubnetId, SubnetId>> edges;  // (parent, child) in preorder
  std::function<void(SubnetId, SubnetId)> visit = [&](SubnetId s, SubnetId parent) {
    for (SubnetId n : msbn_.subnet(s).neighbors) {
      if (n == parent) continue;
      edges.emplace_back(s, n);
      visit(n, s);
    }
  };
  const SubnetId none = static_cast<SubnetId>(msbn_.subnet_count());
  visit(0, none);
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) communicate_belief(it->second, it->first);
  for (const auto& [p, c] : edges) communicate_belief(p, c);
}

void LinkedJunctionForest::reset() {
  locals_ = pristine_;
  for (auto& e : evidence_) e = {};
  linkages_ = pristine_linkages_;
}

LinkedJunctionForest compile_ljf(const Msbn& m) {
  LinkedJunctionForest f;
  f.msbn_ = m;
  const auto& net = m.net();
  for (const auto& s : m.subnets()) {
    bayes::UndirectedGraph g;
    for (VarId v : s.variables) {
      g.add_vertex(v);
      std::vector<VarId> local_family{v};
      for (VarId p : net.cpt(v).parents) {
        if (m.contains(s.id, p)) local_family.push_back(p);
      }
      g.complete(local_family);
    }
    for (SubnetId n : s.neighbors) g.complete(m.dsepset(s.id, n)->variables);
    const auto tri = bayes::triangulate(g);
    auto jt = bayes::build_junction_tree(tri.chordal, tri.elimination_order, net, m.owned_cpts(s.id));
    jt.calibrate();
    f.locals_.push_back(std::move(jt));
  }
  f.evidence_.resize(m.subnet_count());
  for (const auto& d : m.dsepsets()) {
    f.linkages_.push_back(Linkage{d.a, d.b, d.variables, bayes::Potential::over(net, d.variables)});
  }
  f.pristine_ = f.locals_;
  f.pristine_linkages_ = f.linkages_;
  return f;
}

}  // namespace mids::msbn
