#pragma once

// Independent checkers used as test oracles. None of them call into the
// junction-tree or potential code they are used to check.

#include <vector>

#include "mids/bayes/graph.hpp"
#include "mids/bayes/junction_tree.hpp"

namespace mids::testing {

// Maximum-cardinality search followed by a perfect-elimination-order check.
bool is_chordal_mcs(const bayes::UndirectedGraph& g);

// For every variable, the clusters containing it induce a connected subtree.
bool running_intersection_holds(const std::vector<std::vector<bayes::VarId>>& clusters,
                                const std::vector<bayes::Separator>& separators);

// Structural tree check: |E| = |V| - 1 and connected.
bool is_tree(std::size_t nodes, const std::vector<bayes::Separator>& separators);

// Marginal of a dense row-major table (variables sorted ascending) onto
// `keep`, by explicit state decoding.
std::vector<double> direct_marginal(const std::vector<bayes::VarId>& vars,
                                    const std::vector<std::size_t>& arities,
                                    const std::vector<double>& values,
                                    const std::vector<bayes::VarId>& keep);

// Largest disagreement between the two endpoint clusters' marginals over each
// separator, after normalizing both.
double max_separator_disagreement(const bayes::JunctionTree& jt);

}  // namespace mids::testing
