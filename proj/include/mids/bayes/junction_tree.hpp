#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mids/bayes/graph.hpp"
#include "mids/bayes/network.hpp"
#include "mids/bayes/potential.hpp"

namespace mids::bayes {

struct Separator {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  std::vector<VarId> vars;
};

// Hugin-style junction tree. Cluster potentials together with separator
// potentials represent the (conditional) joint as prod(clusters) /
// prod(separators). After calibration every cluster and separator is
// normalized, so each holds the exact marginal given the entered evidence.
class JunctionTree {
 public:
  const std::vector<std::vector<VarId>>& clusters() const { return clusters_; }
  const std::vector<Separator>& separators() const { return separators_; }
  const std::vector<Potential>& potentials() const { return potentials_; }
  const std::vector<Potential>& separator_potentials() const { return separator_potentials_; }
  // Index of the cluster each CPT was assigned to, keyed by child id.
  const std::vector<std::pair<VarId, std::size_t>>& cpt_assignment() const {
    return cpt_assignment_;
  }
  bool calibrated() const { return calibrated_; }
  // Variables covered by some cluster, ascending.
  std::vector<VarId> variables() const;

  // Lowest-id cluster containing every variable in `vars`.
  std::optional<std::size_t> find_cluster(std::span<const VarId> vars) const;
  // Neighbours of cluster i as (neighbour, separator index), ascending.
  std::vector<std::pair<std::size_t, std::size_t>> neighbors(std::size_t cluster) const;

  // Zeroes incompatible entries in every cluster containing the variable.
  void enter_evidence(const Evidence& e);
  // Multiplies a factor into the lowest-id cluster covering its scope.
  void absorb(const Potential& factor);
  // Collect toward cluster 0, then distribute; finally normalizes. Throws
  // ZeroProbabilityEvidence if the evidence has no mass.
  void calibrate();
  // enter_evidence + calibrate.
  void propagate(const Evidence& e);
  // Restores the potentials the tree was built with and clears calibration.
  void reset();

  // Marginal over a variable set contained in one cluster; requires calibration.
  Potential marginal(std::span<const VarId> vars) const;

  friend JunctionTree build_junction_tree(const UndirectedGraph&, const std::vector<VarId>&,
                                          const BayesNet&, const std::vector<VarId>&);

 private:
  void pass_message(std::size_t from, std::size_t to, std::size_t sep);

  std::vector<std::vector<VarId>> clusters_;
  std::vector<Separator> separators_;
  std::vector<Potential> potentials_;
  std::vector<Potential> initial_potentials_;
  std::vector<Potential> separator_potentials_;
  // Per separator: index maps from cluster a / cluster b into the separator table.
  std::vector<std::vector<std::uint32_t>> map_a_;
  std::vector<std::vector<std::uint32_t>> map_b_;
  std::vector<std::pair<VarId, std::size_t>> cpt_assignment_;
  bool calibrated_ = false;
};

// Clusters are the maximal cliques of the chordal graph, sorted
// lexicographically; the tree is the maximum-weight spanning tree on
// separator size with ties broken by cluster-index pair. CPTs of
// `cpt_children` are each multiplied into the lowest-id cluster holding their
// family. Throws NotChordal if `elimination_order` is not a perfect
// elimination order of `chordal`.
JunctionTree build_junction_tree(const UndirectedGraph& chordal,
                                 const std::vector<VarId>& elimination_order,
                                 const BayesNet& net, const std::vector<VarId>& cpt_children);
JunctionTree build_junction_tree(const UndirectedGraph& chordal,
                                 const std::vector<VarId>& elimination_order,
                                 const BayesNet& net);

// moralize -> triangulate -> build.
JunctionTree compile(const BayesNet& net);

JunctionTree propagate(JunctionTree jt, const Evidence& e);
// Throws NotCalibrated, UnknownVariable.
Posterior query_posterior(const JunctionTree& jt, VarId target);

}  // namespace mids::bayes
