#pragma once

// Plain-text network format. Blank lines and '#' comments are ignored.
//
//   variables
//   <id> <name> <state> <state> ...        one line per variable, ids 0..n-1 in order
//   edges
//   <child>: <parent> <parent> ...         parent order fixes the CPT row layout
//   cpts
//   <child> <row> <p_0> ... <p_{arity-1}>  one line per parent combination
//
// Children without parents may be omitted from `edges`. Rows enumerate parent
// states in row-major order over the listed parents. serialize() writes the
// canonical form: every section present, all ids ascending, probabilities in
// shortest round-trip decimal form. parse(serialize(x)) == x, and canonical
// files round-trip byte-identically.

#include <filesystem>
#include <string>
#include <string_view>

#include "mids/bayes/network.hpp"

namespace mids::bayes {

BayesNet parse_network(std::string_view text);
std::string serialize_network(const BayesNet& net);

BayesNet load_network(const std::filesystem::path& path);
void save_network(const BayesNet& net, const std::filesystem::path& path);

}  // namespace mids::bayes
