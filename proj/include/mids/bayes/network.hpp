#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mids/common/error.hpp"

namespace mids::bayes {

using VarId = std::uint32_t;

// Normalization tolerance for CPT rows and posteriors.
inline constexpr double kProbTolerance = 1e-9;

struct Variable {
  VarId id = 0;
  std::string name;
  std::vector<std::string> states;

  std::size_t arity() const { return states.size(); }

  bool operator==(const Variable&) const = default;
};

// P(child | parents). Rows are parent combinations in row-major order over
// `parents` as listed (first parent most significant); entry
// table[row * arity(child) + state].
struct Cpt {
  VarId child = 0;
  std::vector<VarId> parents;
  std::vector<double> table;

  bool operator==(const Cpt&) const = default;
};

class BayesNet {
 public:
  VarId add_variable(std::string name, std::vector<std::string> states);
  // Binary variable with states "0"/"1"; convenient for tests and fixtures.
  VarId add_binary(std::string name) { return add_variable(std::move(name), {"0", "1"}); }

  // Stores the table as given; validate_network() reports problems.
  void set_cpt(VarId child, std::vector<VarId> parents, std::vector<double> table);

  std::size_t size() const { return variables_.size(); }
  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(VarId id) const;
  const Cpt& cpt(VarId id) const;
  const std::vector<Cpt>& cpts() const { return cpts_; }
  std::size_t arity(VarId id) const { return variable(id).arity(); }
  std::optional<VarId> find(std::string_view name) const;
  VarId require(std::string_view name) const;

  // Replaces the state list of a variable, keeping its id. CPTs touching it
  // must be re-set by the caller.
  void set_states(VarId id, std::vector<std::string> states);

  std::size_t row_count(VarId child) const;
  std::vector<VarId> children(VarId id) const;

  bool operator==(const BayesNet&) const = default;

 private:
  std::vector<Variable> variables_;
  std::vector<Cpt> cpts_;
};

struct Violation {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(ErrorCode code) const;
};

ValidationReport validate_network(const BayesNet& net);
// Throws the first violation as an Error.
void require_valid(const BayesNet& net);

// Topological order with lowest-id tie-break; throws CyclicGraph.
std::vector<VarId> topological_order(const BayesNet& net);

class Evidence {
 public:
  Evidence() = default;
  Evidence(std::initializer_list<std::pair<const VarId, std::size_t>> init) : values_(init) {}

  void set(VarId var, std::size_t state) { values_[var] = state; }
  void erase(VarId var) { values_.erase(var); }
  bool contains(VarId var) const { return values_.count(var) != 0; }
  std::optional<std::size_t> get(VarId var) const;
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // Throws UnknownVariable / ArityMismatch when inconsistent with `net`.
  void check_against(const BayesNet& net) const;

  bool operator==(const Evidence&) const = default;

 private:
  std::map<VarId, std::size_t> values_;
};

struct Posterior {
  VarId variable = 0;
  std::vector<double> probabilities;

  std::size_t argmax() const;
};

// Chain-rule product of CPT entries; throws IncompleteAssignment.
double joint_probability(const BayesNet& net, const Evidence& full_assignment);

}  // namespace mids::bayes
