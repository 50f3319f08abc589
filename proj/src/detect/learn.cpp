#include "mids/detect/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mids/common/error.hpp"

namespace mids::detect {

std::vector<double> conditional_mutual_information(const DiscreteDataset& data) {
  const std::size_t m = data.width();
  const std::size_t k = data.classes.size();
  std::vector<double> out(m * m, 0.0);
  if (data.rows() == 0) return out;
  const double n = static_cast<double>(data.rows());

  // n(x_i, c) for every feature.
  std::vector<std::vector<std::size_t>> single(m);
  for (std::size_t f = 0; f < m; ++f) single[f].assign(data.features[f].states.size() * k, 0);
  const auto class_counts = data.class_counts();
  for (std::size_t r = 0; r < data.rows(); ++r) {
    const auto* row = data.row(r);
    for (std::size_t f = 0; f < m; ++f) ++single[f][row[f] * k + data.labels[r]];
  }

  std::vector<std::size_t> joint;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t ai = data.features[i].states.size();
    for (std::size_t j = i + 1; j < m; ++j) {
      const std::size_t aj = data.features[j].states.size();
      joint.assign(ai * aj * k, 0);
      for (std::size_t r = 0; r < data.rows(); ++r) {
        ++joint[(data.value(r, i) * aj + data.value(r, j)) * k + data.labels[r]];
      }
      double mi = 0;
      for (std::size_t xi = 0; xi < ai; ++xi) {
        for (std::size_t xj = 0; xj < aj; ++xj) {
          for (std::size_t c = 0; c < k; ++c) {
            const auto nij = joint[(xi * aj + xj) * k + c];
            if (nij == 0) continue;
            const double ratio = static_cast<double>(nij) * static_cast<double>(class_counts[c]) /
                                 (static_cast<double>(single[i][xi * k + c]) * static_cast<double>(single[j][xj * k + c]));
            mi += static_cast<double>(nij) / n * std::log(ratio);
          }
        }
      }
      out[i * m + j] = out[j * m + i] = mi;
    }
  }
  return out;
}

FeatureTree chow_liu_tree(const DiscreteDataset& data) {
  const std::size_t m = data.width();
  const auto w = conditional_mutual_information(data);
  std::vector<TreeEdge> candidates;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) candidates.push_back({i, j, w[i * m + j]});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const TreeEdge& x, const TreeEdge& y) { return x.weight > y.weight; });

  std::vector<std::size_t> root(m);
  std::iota(root.begin(), root.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  FeatureTree tree;
  std::vector<std::vector<std::size_t>> adj(m);
  for (const auto& e : candidates) {
    const auto ra = find(e.a), rb = find(e.b);
    if (ra == rb) continue;
    root[std::max(ra, rb)] = std::min(ra, rb);
    tree.edges.push_back(e);
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
    if (tree.edges.size() + 1 == m) break;
  }

  tree.parent.assign(m, std::nullopt);
  std::vector<bool> seen(m, false);
  std::vector<std::size_t> queue;
  // A forest is impossible for a complete candidate graph, but start a BFS
  // from every unreached feature anyway so each gets oriented.
  for (std::size_t start = 0; start < m; ++start) {
    if (seen[start]) continue;
    seen[start] = true;
    queue.assign(1, start);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      auto nbrs = adj[queue[q]];
      std::sort(nbrs.begin(), nbrs.end());
      for (auto nb : nbrs) {
        if (seen[nb]) continue;
        seen[nb] = true;
        tree.parent[nb] = queue[q];
        queue.push_back(nb);
      }
    }
  }
  return tree;
}

bayes::BayesNet learn_structure(const DiscreteDataset& data) {
  if (data.rows() == 0) throw Error(ErrorCode::EmptyDataset, "cannot learn a structure from an empty dataset");
  if (data.classes.empty()) throw Error(ErrorCode::EmptyDataset, "dataset has no class column");
  const auto tree = chow_liu_tree(data);
  bayes::BayesNet net;
  net.add_variable(std::string(kClassName), data.classes);
  for (const auto& col : data.features) net.add_variable(col.name, col.states);
  const std::size_t k = data.classes.size();
  net.set_cpt(kClassVar, {}, std::vector<double>(k, 1.0 / static_cast<double>(k)));
  for (std::size_t f = 0; f < data.width(); ++f) {
    std::vector<bayes::VarId> parents{kClassVar};
    if (tree.parent[f]) parents.push_back(feature_var(*tree.parent[f]));
    const auto a = data.features[f].states.size();
    std::size_t rows = k;
    if (tree.parent[f]) rows *= data.features[*tree.parent[f]].states.size();
    net.set_cpt(feature_var(f), std::move(parents), std::vector<double>(rows * a, 1.0 / static_cast<double>(a)));
  }
  return net;
}

bayes::BayesNet fit_cpts(bayes::BayesNet dag, const DiscreteDataset& data, double alpha) {
  if (alpha < 0) throw Error(ErrorCode::InvalidArgument, "smoothing must be nonnegative");
  // Column of each variable: -1 for the class labels.
  std::vector<long> column(dag.size());
  for (const auto& v : dag.variables()) {
    if (v.name == kClassName) {
      if (v.states != data.classes) throw Error(ErrorCode::ArityMismatch, "class states differ from the dataset");
      column[v.id] = -1;
      continue;
    }
    const auto it = std::find_if(data.features.begin(), data.features.end(),
                                 [&](const Column& c) { return c.name == v.name; });
    if (it == data.features.end()) throw Error(ErrorCode::UnknownVariable, "no column for '" + v.name + "'");
    if (it->states.size() != v.arity()) throw Error(ErrorCode::ArityMismatch, "'" + v.name + "' arity differs");
    column[v.id] = it - data.features.begin();
  }
  auto value = [&](std::size_t r, bayes::VarId v) -> std::size_t {
    return column[v] < 0 ? data.labels[r] : data.value(r, static_cast<std::size_t>(column[v]));
  };

  for (const auto& v : dag.variables()) {
    const auto cpt = dag.cpt(v.id);
    const std::size_t a = v.arity();
    const std::size_t rows = dag.row_count(v.id);
    std::vector<double> counts(rows * a, 0.0);
    for (std::size_t r = 0; r < data.rows(); ++r) {
      std::size_t row = 0;
      for (auto p : cpt.parents) row = row * dag.arity(p) + value(r, p);
      counts[row * a + value(r, v.id)] += 1.0;
    }
    std::vector<double> table(rows * a);
    for (std::size_t row = 0; row < rows; ++row) {
      double total = 0;
      for (std::size_t s = 0; s < a; ++s) total += counts[row * a + s];
      const double denom = total + alpha * static_cast<double>(a);
      for (std::size_t s = 0; s < a; ++s) {
        table[row * a + s] = denom > 0 ? (counts[row * a + s] + alpha) / denom : 1.0 / static_cast<double>(a);
      }
    }
    dag.set_cpt(v.id, cpt.parents, std::move(table));
  }
  return dag;
}

}  // namespace mids::detect
