#include "mids/bayes/graph.hpp"

#include <limits>

namespace mids::bayes {

void UndirectedGraph::add_edge(VarId a, VarId b) {
  if (a == b) {
    add_vertex(a);
    return;
  }
  adjacency_[a].insert(b);
  adjacency_[b].insert(a);
}

void UndirectedGraph::complete(const std::vector<VarId>& vertices) {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    add_vertex(vertices[i]);
    for (std::size_t j = i + 1; j < vertices.size(); ++j) add_edge(vertices[i], vertices[j]);
  }
}

bool UndirectedGraph::has_edge(VarId a, VarId b) const {
  const auto it = adjacency_.find(a);
  return it != adjacency_.end() && it->second.count(b) != 0;
}

const std::set<VarId>& UndirectedGraph::neighbors(VarId v) const {
  static const std::set<VarId> empty;
  const auto it = adjacency_.find(v);
  return it == adjacency_.end() ? empty : it->second;
}

std::vector<VarId> UndirectedGraph::vertices() const {
  std::vector<VarId> out;
  out.reserve(adjacency_.size());
  for (const auto& [v, _] : adjacency_) out.push_back(v);
  return out;
}

std::vector<Edge> UndirectedGraph::edges() const {
  std::vector<Edge> out;
  for (const auto& [v, nbrs] : adjacency_) {
    for (VarId u : nbrs) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

std::size_t UndirectedGraph::edge_count() const {
  std::size_t twice = 0;
  for (const auto& [_, nbrs] : adjacency_) twice += nbrs.size();
  return twice / 2;
}

bool UndirectedGraph::is_clique(const std::vector<VarId>& vertices) const {
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (!has_edge(vertices[i], vertices[j])) return false;
    }
  }
  return true;
}

UndirectedGraph moralize(const BayesNet& net) {
  UndirectedGraph g;
  for (const auto& v : net.variables()) g.add_vertex(v.id);
  for (const auto& c : net.cpts()) {
    for (VarId p : c.parents) g.add_edge(p, c.child);
    for (std::size_t i = 0; i < c.parents.size(); ++i) {
      for (std::size_t j = i + 1; j < c.parents.size(); ++j) g.add_edge(c.parents[i], c.parents[j]);
    }
  }
  return g;
}

Triangulation triangulate(const UndirectedGraph& graph) {
  Triangulation result;
  result.chordal = graph;
  UndirectedGraph work = graph;
  std::set<VarId> remaining;
  for (VarId v : graph.vertices()) remaining.insert(v);

  while (!remaining.empty()) {
    VarId best = 0;
    std::size_t best_fill = std::numeric_limits<std::size_t>::max();
    for (VarId v : remaining) {  // ascending, so strict < keeps the lowest id on ties
      std::vector<VarId> nbrs;
      for (VarId u : work.neighbors(v)) {
        if (remaining.count(u)) nbrs.push_back(u);
      }
      std::size_t fill = 0;
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
          if (!work.has_edge(nbrs[i], nbrs[j])) ++fill;
        }
      }
      if (fill < best_fill) {
        best_fill = fill;
        best = v;
      }
    }

    std::vector<VarId> nbrs;
    for (VarId u : work.neighbors(best)) {
      if (remaining.count(u)) nbrs.push_back(u);
    }
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        if (!work.has_edge(nbrs[i], nbrs[j])) {
          work.add_edge(nbrs[i], nbrs[j]);
          result.chordal.add_edge(nbrs[i], nbrs[j]);
          result.fill_edges.emplace_back(nbrs[i], nbrs[j]);
        }
      }
    }
    result.elimination_order.push_back(best);
    remaining.erase(best);
  }
  return result;
}

}  // namespace mids::bayes
