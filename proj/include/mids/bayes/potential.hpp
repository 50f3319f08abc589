#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mids/bayes/network.hpp"

namespace mids::bayes {

// Dense nonnegative table over a sorted variable set, row-major (the
// highest-id variable varies fastest). A potential over no variables holds
// a single entry.
class Potential {
 public:
  Potential() : values_(1, 1.0) {}
  Potential(std::vector<VarId> vars, std::vector<std::size_t> arities, double fill = 1.0);

  // P(child | parents) as a potential over the sorted family.
  static Potential from_cpt(const BayesNet& net, VarId child);
  static Potential over(const BayesNet& net, std::vector<VarId> vars, double fill = 1.0);

  const std::vector<VarId>& vars() const { return vars_; }
  const std::vector<std::size_t>& arities() const { return arities_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool contains(VarId v) const;
  bool contains_all(std::span<const VarId> vars) const;

  // For each entry of *this, the flat index of the matching entry in a
  // potential over `subset` (which must be a subset of vars()).
  std::vector<std::uint32_t> index_map(std::span<const VarId> subset) const;

  // *this *= factor, with factor's variables a subset of ours.
  void multiply(const Potential& factor);
  void multiply(const Potential& factor, std::span<const std::uint32_t> index);
  Potential marginalize(std::span<const VarId> keep) const;
  Potential marginalize(std::span<const VarId> keep, std::span<const std::uint32_t> index) const;

  // Zeroes every entry whose `var` coordinate differs from `state`.
  void enter_evidence(VarId var, std::size_t state);

  double total() const;
  // Scales to sum 1; throws ZeroProbabilityEvidence on an all-zero table.
  void normalize();

  bool operator==(const Potential&) const = default;

 private:
  std::vector<VarId> vars_;
  std::vector<std::size_t> arities_;
  std::vector<double> values_;
};

}  // namespace mids::bayes
