#pragma once

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "mids/bayes/network.hpp"

namespace mids::bayes {

using Edge = std::pair<VarId, VarId>;  // first < second

class UndirectedGraph {
 public:
  void add_vertex(VarId v) { adjacency_[v]; }
  void add_edge(VarId a, VarId b);
  // Adds every missing edge among `vertices`.
  void complete(const std::vector<VarId>& vertices);
  bool has_vertex(VarId v) const { return adjacency_.count(v) != 0; }
  bool has_edge(VarId a, VarId b) const;
  const std::set<VarId>& neighbors(VarId v) const;
  std::vector<VarId> vertices() const;
  std::vector<Edge> edges() const;
  std::size_t vertex_count() const { return adjacency_.size(); }
  std::size_t edge_count() const;
  bool is_clique(const std::vector<VarId>& vertices) const;

  bool operator==(const UndirectedGraph&) const = default;

 private:
  std::map<VarId, std::set<VarId>> adjacency_;
};

UndirectedGraph moralize(const BayesNet& net);

struct Triangulation {
  UndirectedGraph chordal;
  std::vector<VarId> elimination_order;
  std::vector<Edge> fill_edges;
};

// Min-fill elimination; ties go to the lowest vertex id.
Triangulation triangulate(const UndirectedGraph& graph);

}  // namespace mids::bayes
