#include "random_nets.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "mids/bayes/junction_tree.hpp"

namespace mids::testing {

bayes::BayesNet random_net(Rng& rng, const RandomNetOptions& o) {
  const std::size_t n = o.variables;
  // topo[i] is the id of the i-th variable in topological order.
  std::vector<bayes::VarId> topo(n);
  std::iota(topo.begin(), topo.end(), bayes::VarId{0});
  if (o.shuffle_ids) rng.shuffle(std::span<bayes::VarId>(topo));

  std::vector<std::size_t> arity(n);
  for (std::size_t v = 0; v < n; ++v) {
    arity[v] = o.min_arity + rng.uniform(o.max_arity - o.min_arity + 1);
  }

  bayes::BayesNet net;
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<std::string> states;
    for (std::size_t s = 0; s < arity[v]; ++s) states.push_back("s" + std::to_string(s));
    net.add_variable("v" + std::to_string(v), std::move(states));
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bayes::VarId child = topo[i];
    std::vector<bayes::VarId> candidates(topo.begin(), topo.begin() + static_cast<long>(i));
    rng.shuffle(std::span<bayes::VarId>(candidates));
    std::size_t k = candidates.empty() ? 0 : rng.uniform(std::min(o.max_parents, i) + 1);
    if (o.connected && i > 0 && k == 0) k = 1;
    std::vector<bayes::VarId> parents(candidates.begin(), candidates.begin() + static_cast<long>(k));

    std::size_t rows = 1;
    for (auto p : parents) rows *= arity[p];
    std::vector<double> table;
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<double> w(arity[child]);
      double total = 0;
      for (double& x : w) {
        x = o.min_weight + rng.unit();
        total += x;
      }
      for (double x : w) table.push_back(x / total);
    }
    net.set_cpt(child, std::move(parents), std::move(table));
  }
  return net;
}

bayes::Evidence random_evidence(Rng& rng, const bayes::BayesNet& net, std::size_t count) {
  std::vector<bayes::VarId> ids(net.size());
  std::iota(ids.begin(), ids.end(), bayes::VarId{0});
  rng.shuffle(std::span<bayes::VarId>(ids));
  bayes::Evidence e;
  for (std::size_t i = 0; i < std::min(count, ids.size()); ++i) {
    e.set(ids[i], rng.uniform(net.arity(ids[i])));
  }
  return e;
}

bayes::BayesNet two_node_net() {
  bayes::BayesNet net;
  const auto a = net.add_binary("A");
  const auto b = net.add_binary("B");
  net.set_cpt(a, {}, {0.7, 0.3});
  net.set_cpt(b, {a}, {0.8, 0.2, 0.1, 0.9});
  return net;
}

}  // namespace mids::testing

namespace mids::testing {

msbn::Msbn random_sectioning(Rng& rng, const bayes::BayesNet& net, std::size_t cuts, std::size_t attempts) {
  const auto jt = bayes::compile(net);
  const auto& clusters = jt.clusters();
  const auto& seps = jt.separators();
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    // Only links with a nonempty separator can become subnet links.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < seps.size(); ++i) {
      if (!seps[i].vars.empty()) order.push_back(i);
    }
    rng.shuffle(std::span<std::size_t>(order));
    std::vector<bool> cut(seps.size(), false);
    for (std::size_t i = 0; i < std::min(cuts, order.size()); ++i) cut[order[i]] = true;

    // Union-find over uncut edges.
    std::vector<std::size_t> root(clusters.size());
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
      return root[x] == x ? x : root[x] = find(root[x]);
    };
    for (std::size_t s = 0; s < seps.size(); ++s) {
      if (!cut[s]) root[find(seps[s].a)] = find(seps[s].b);
    }
    std::map<std::size_t, msbn::SubnetId> ids;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      ids.emplace(find(c), static_cast<msbn::SubnetId>(ids.size()));
    }
    std::vector<msbn::SubnetSpec> specs(ids.size());
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].id = static_cast<msbn::SubnetId>(i);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      auto& s = specs[ids[find(c)]];
      s.variables.insert(s.variables.end(), clusters[c].begin(), clusters[c].end());
    }
    for (std::size_t s = 0; s < seps.size(); ++s) {
      if (cut[s]) specs[ids[find(seps[s].a)]].neighbors.push_back(ids[find(seps[s].b)]);
    }
    try {
      return msbn::section_network(net, specs);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::UnsoundDsepset) throw;
    }
  }
  std::vector<msbn::SubnetSpec> one(1);
  for (bayes::VarId v = 0; v < net.size(); ++v) one[0].variables.push_back(v);
  return msbn::section_network(net, one);
}

}  // namespace mids::testing
