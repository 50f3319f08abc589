#include "mids/bayes/junction_tree.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

#include "mids/kernels/kernels.hpp"

namespace mids::bayes {

std::vector<VarId> JunctionTree::variables() const {
  std::set<VarId> all;
  for (const auto& c : clusters_) all.insert(c.begin(), c.end());
  return {all.begin(), all.end()};
}

std::optional<std::size_t> JunctionTree::find_cluster(std::span<const VarId> vars) const {
  for (std::size_t i = 0; i < clusters_.size(); ++i) {
    const auto& c = clusters_[i];
    if (std::all_of(vars.begin(), vars.end(),
                    [&c](VarId v) { return std::binary_search(c.begin(), c.end(), v); })) {
      return i;
    }
  }
  return std::nullopt;
}

std::vector<std::pair<std::size_t, std::size_t>> JunctionTree::neighbors(std::size_t cluster) const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 0; s < separators_.size(); ++s) {
    if (separators_[s].a == cluster) out.emplace_back(separators_[s].b, s);
    if (separators_[s].b == cluster) out.emplace_back(separators_[s].a, s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

void JunctionTree::enter_evidence(const Evidence& e) {
  for (const auto& [var, state] : e) {
    bool found = false;
    for (auto& pot : potentials_) {
      if (!pot.contains(var)) continue;
      const auto pos = static_cast<std::size_t>(
          std::lower_bound(pot.vars().begin(), pot.vars().end(), var) - pot.vars().begin());
      if (state >= pot.arities()[pos]) {
        throw Error(ErrorCode::ArityMismatch, "evidence state " + std::to_string(state) +
                                                  " out of range for variable " +
                                                  std::to_string(var));
      }
      pot.enter_evidence(var, state);
      found = true;
    }
    if (!found) {
      throw Error(ErrorCode::UnknownVariable,
                  "evidence variable " + std::to_string(var) + " not in junction tree");
    }
  }
  if (!e.empty()) calibrated_ = false;
}

void JunctionTree::absorb(const Potential& factor) {
  const auto idx = find_cluster(factor.vars());
  if (!idx) {
    throw Error(ErrorCode::UnknownVariable, "no cluster covers the absorbed factor's scope");
  }
  potentials_[*idx].multiply(factor);
  calibrated_ = false;
}

void JunctionTree::pass_message(std::size_t from, std::size_t to, std::size_t sep) {
  const Separator& s = separators_[sep];
  const auto& map_from = (s.a == from) ? map_a_[sep] : map_b_[sep];
  const auto& map_to = (s.a == to) ? map_a_[sep] : map_b_[sep];
  Potential fresh = potentials_[from].marginalize(s.vars, map_from);
  Potential ratio = fresh;
  kernels::divide_guarded(ratio.values(), fresh.values(), separator_potentials_[sep].values());
  potentials_[to].multiply(ratio, map_to);
  separator_potentials_[sep] = std::move(fresh);
}

void JunctionTree::calibrate() {
  const std::size_t n = clusters_.size();
  if (n == 0) {
    calibrated_ = true;
    return;
  }
  // Depth-first preorder from cluster 0, visiting neighbours in ascending order.
  std::vector<std::size_t> order;
  std::vector<std::size_t> parent(n, n), parent_sep(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const std::size_t c = stack.back();
    stack.pop_back();
    order.push_back(c);
    auto nbrs = neighbors(c);
    for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
      if (!seen[it->first]) {
        seen[it->first] = true;
        parent[it->first] = c;
        parent_sep[it->first] = it->second;
        stack.push_back(it->first);
      }
    }
  }

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (*it != 0) pass_message(*it, parent[*it], parent_sep[*it]);
  }
  if (!(potentials_[0].total() > 0.0)) {
    throw Error(ErrorCode::ZeroProbabilityEvidence, "evidence has zero probability");
  }
  for (std::size_t c : order) {
    if (c != 0) pass_message(parent[c], c, parent_sep[c]);
  }
  for (auto& p : potentials_) p.normalize();
  for (auto& p : separator_potentials_) p.normalize();
  calibrated_ = true;
}

void JunctionTree::propagate(const Evidence& e) {
  enter_evidence(e);
  calibrate();
}

void JunctionTree::reset() {
  potentials_ = initial_potentials_;
  for (auto& s : separator_potentials_) std::fill(s.values().begin(), s.values().end(), 1.0);
  calibrated_ = false;
}

Potential JunctionTree::marginal(std::span<const VarId> vars) const {
  if (!calibrated_) throw Error(ErrorCode::NotCalibrated, "junction tree is not calibrated");
  const auto idx = find_cluster(vars);
  if (!idx) throw Error(ErrorCode::UnknownVariable, "no cluster covers the requested variables");
  Potential m = potentials_[*idx].marginalize(vars);
  m.normalize();
  return m;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace

JunctionTree build_junction_tree(const UndirectedGraph& chordal,
                                 const std::vector<VarId>& elimination_order,
                                 const BayesNet& net, const std::vector<VarId>& cpt_children) {
  const auto vertices = chordal.vertices();
  {
    std::vector<VarId> sorted = elimination_order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != vertices) {
      throw Error(ErrorCode::NotChordal, "elimination order does not cover the graph's vertices");
    }
  }
  std::map<VarId, std::size_t> position;
  for (std::size_t i = 0; i < elimination_order.size(); ++i) position[elimination_order[i]] = i;

  std::vector<std::vector<VarId>> candidates;
  for (VarId v : elimination_order) {
    std::vector<VarId> clique{v};
    for (VarId u : chordal.neighbors(v)) {
      if (position[u] > position[v]) clique.push_back(u);
    }
    std::sort(clique.begin(), clique.end());
    if (!chordal.is_clique(clique)) {
      throw Error(ErrorCode::NotChordal, "vertex " + std::to_string(v) +
                                             " has non-adjacent later neighbours; graph is not "
                                             "chordal under the given order");
    }
    candidates.push_back(std::move(clique));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  JunctionTree jt;
  for (const auto& c : candidates) {
    const bool dominated = std::any_of(candidates.begin(), candidates.end(), [&c](const auto& o) {
      return o.size() > c.size() && std::includes(o.begin(), o.end(), c.begin(), c.end());
    });
    if (!dominated) jt.clusters_.push_back(c);
  }

  const std::size_t n = jt.clusters_.size();
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> candidates_edges;  // weight, i, j
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<VarId> common;
      std::set_intersection(jt.clusters_[i].begin(), jt.clusters_[i].end(),
                            jt.clusters_[j].begin(), jt.clusters_[j].end(),
                            std::back_inserter(common));
      candidates_edges.emplace_back(common.size(), i, j);
    }
  }
  std::stable_sort(candidates_edges.begin(), candidates_edges.end(),
                   [](const auto& x, const auto& y) { return std::get<0>(x) > std::get<0>(y); });
  DisjointSets dsu(n);
  for (const auto& [w, i, j] : candidates_edges) {
    if (!dsu.unite(i, j)) continue;
    Separator s{i, j, {}};
    std::set_intersection(jt.clusters_[i].begin(), jt.clusters_[i].end(), jt.clusters_[j].begin(),
                          jt.clusters_[j].end(), std::back_inserter(s.vars));
    jt.separators_.push_back(std::move(s));
    if (jt.separators_.size() + 1 == n) break;
  }

  for (const auto& c : jt.clusters_) jt.potentials_.push_back(Potential::over(net, c, 1.0));
  for (VarId child : cpt_children) {
    std::vector<VarId> family = net.cpt(child).parents;
    family.push_back(child);
    std::sort(family.begin(), family.end());
    const auto idx = jt.find_cluster(family);
    if (!idx) {
      throw Error(ErrorCode::UncoveredVariable,
                  "family of '" + net.variable(child).name + "' is not contained in any cluster");
    }
    jt.potentials_[*idx].multiply(Potential::from_cpt(net, child));
    jt.cpt_assignment_.emplace_back(child, *idx);
  }
  jt.initial_potentials_ = jt.potentials_;

  for (const auto& s : jt.separators_) {
    jt.separator_potentials_.push_back(Potential::over(net, s.vars, 1.0));
    jt.map_a_.push_back(jt.potentials_[s.a].index_map(s.vars));
    jt.map_b_.push_back(jt.potentials_[s.b].index_map(s.vars));
  }
  return jt;
}

JunctionTree build_junction_tree(const UndirectedGraph& chordal,
                                 const std::vector<VarId>& elimination_order,
                                 const BayesNet& net) {
  std::vector<VarId> all(net.size());
  std::iota(all.begin(), all.end(), VarId{0});
  return build_junction_tree(chordal, elimination_order, net, all);
}

JunctionTree compile(const BayesNet& net) {
  require_valid(net);
  const auto tri = triangulate(moralize(net));
  return build_junction_tree(tri.chordal, tri.elimination_order, net);
}

JunctionTree propagate(JunctionTree jt, const Evidence& e) {
  jt.propagate(e);
  return jt;
}

Posterior query_posterior(const JunctionTree& jt, VarId target) {
  if (!jt.calibrated()) throw Error(ErrorCode::NotCalibrated, "junction tree is not calibrated");
  const VarId scope[] = {target};
  if (!jt.find_cluster(scope)) {
    throw Error(ErrorCode::UnknownVariable,
                "variable " + std::to_string(target) + " not in junction tree");
  }
  Potential m = jt.marginal(scope);
  return Posterior{target, {m.values().begin(), m.values().end()}};
}

}  // namespace mids::bayes
