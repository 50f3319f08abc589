#pragma once

#include <optional>
#include <vector>

#include "mids/bayes/network.hpp"
#include "mids/detect/dataset.hpp"

namespace mids::detect {

// Learned networks put the class variable at id 0 and feature f at id f + 1.
inline constexpr bayes::VarId kClassVar = 0;
inline constexpr std::string_view kClassName = "class";
inline bayes::VarId feature_var(std::size_t f) { return static_cast<bayes::VarId>(f + 1); }

// I(Xi; Xj | C) in nats from raw counts, as a dense width x width matrix
// (diagonal zero).
std::vector<double> conditional_mutual_information(const DiscreteDataset& data);

struct TreeEdge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;
  double weight = 0;
};

struct FeatureTree {
  std::vector<TreeEdge> edges;                 // in selection order
  std::vector<std::optional<std::size_t>> parent;  // per feature; root has none
};

// Maximum spanning tree over features weighted by conditional mutual
// information (Kruskal; equal weights resolved by the lower (a, b) pair),
// oriented away from feature 0.
FeatureTree chow_liu_tree(const DiscreteDataset& data);

// Tree-augmented structure: the class is a parent of every feature, and each
// non-root feature also has its tree parent. CPTs are uniform until fitted.
// Throws EmptyDataset.
bayes::BayesNet learn_structure(const DiscreteDataset& data);

// Maximum likelihood with additive smoothing:
// (count + alpha) / (row count + alpha * arity). Unseen rows with alpha = 0
// are left uniform. Variables are matched to columns by name, the class
// variable by kClassName.
bayes::BayesNet fit_cpts(bayes::BayesNet dag, const DiscreteDataset& data, double alpha = 1.0);

}  // namespace mids::detect
