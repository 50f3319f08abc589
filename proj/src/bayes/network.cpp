#include "mids/bayes/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "mids/common/text.hpp"

namespace mids::bayes {

VarId BayesNet::add_variable(std::string name, std::vector<std::string> states) {
  const auto id = static_cast<VarId>(variables_.size());
  variables_.push_back(Variable{id, std::move(name), std::move(states)});
  cpts_.push_back(Cpt{id, {}, {}});
  return id;
}

void BayesNet::set_cpt(VarId child, std::vector<VarId> parents, std::vector<double> table) {
  if (child >= variables_.size()) {
    throw Error(ErrorCode::UnknownVariable, "cpt child " + std::to_string(child));
  }
  cpts_[child] = Cpt{child, std::move(parents), std::move(table)};
}

const Variable& BayesNet::variable(VarId id) const {
  if (id >= variables_.size()) throw Error(ErrorCode::UnknownVariable, "id " + std::to_string(id));
  return variables_[id];
}

const Cpt& BayesNet::cpt(VarId id) const {
  if (id >= cpts_.size()) throw Error(ErrorCode::UnknownVariable, "id " + std::to_string(id));
  return cpts_[id];
}

std::optional<VarId> BayesNet::find(std::string_view name) const {
  for (const auto& v : variables_) {
    if (v.name == name) return v.id;
  }
  return std::nullopt;
}

VarId BayesNet::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorCode::UnknownVariable, "no variable named '" + std::string(name) + "'");
}

void BayesNet::set_states(VarId id, std::vector<std::string> states) {
  if (id >= variables_.size()) throw Error(ErrorCode::UnknownVariable, "id " + std::to_string(id));
  variables_[id].states = std::move(states);
}

std::size_t BayesNet::row_count(VarId child) const {
  std::size_t rows = 1;
  for (VarId p : cpt(child).parents) rows *= arity(p);
  return rows;
}

std::vector<VarId> BayesNet::children(VarId id) const {
  std::vector<VarId> out;
  for (const auto& c : cpts_) {
    if (std::find(c.parents.begin(), c.parents.end(), id) != c.parents.end()) {
      out.push_back(c.child);
    }
  }
  return out;
}

bool ValidationReport::has(ErrorCode code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [code](const Violation& v) { return v.code == code; });
}

namespace {

bool has_cycle(const BayesNet& net) {
  // Kahn's algorithm over valid parent links only.
  const std::size_t n = net.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& c : net.cpts()) {
    for (VarId p : c.parents) {
      if (p < n && p != c.child) ++indegree[c.child];
      if (p == c.child) return true;
    }
  }
  std::vector<VarId> ready;
  for (VarId v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const VarId v = ready.back();
    ready.pop_back();
    ++seen;
    for (const auto& c : net.cpts()) {
      for (VarId p : c.parents) {
        if (p == v && --indegree[c.child] == 0) ready.push_back(c.child);
      }
    }
  }
  return seen != n;
}

}  // namespace

ValidationReport validate_network(const BayesNet& net) {
  ValidationReport report;
  const std::size_t n = net.size();
  for (const auto& v : net.variables()) {
    if (v.arity() < 2) {
      report.violations.push_back(
          {ErrorCode::ArityMismatch, "variable '" + v.name + "' has arity " +
                                         std::to_string(v.arity()) + " (< 2)"});
    }
    std::set<std::string> names(v.states.begin(), v.states.end());
    if (names.size() != v.states.size()) {
      report.violations.push_back(
          {ErrorCode::ArityMismatch, "variable '" + v.name + "' has duplicate state names"});
    }
  }
  bool parents_ok = true;
  for (const auto& c : net.cpts()) {
    std::set<VarId> distinct;
    for (VarId p : c.parents) {
      if (p >= n) {
        parents_ok = false;
        report.violations.push_back({ErrorCode::UnknownVariable,
                                     "cpt of " + std::to_string(c.child) +
                                         " references parent " + std::to_string(p)});
      } else if (!distinct.insert(p).second) {
        report.violations.push_back({ErrorCode::ArityMismatch,
                                     "cpt of " + std::to_string(c.child) +
                                         " lists parent " + std::to_string(p) + " twice"});
      }
    }
  }
  if (parents_ok && has_cycle(net)) {
    report.violations.push_back({ErrorCode::CyclicGraph, "edge relation contains a cycle"});
  }
  if (!parents_ok) return report;
  for (const auto& c : net.cpts()) {
    const std::size_t arity = net.arity(c.child);
    const std::size_t rows = net.row_count(c.child);
    if (c.table.size() != rows * arity) {
      report.violations.push_back(
          {ErrorCode::ArityMismatch, "cpt of '" + net.variable(c.child).name + "' has " +
                                         std::to_string(c.table.size()) + " entries, expected " +
                                         std::to_string(rows * arity)});
      continue;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      bool in_range = true;
      for (std::size_t s = 0; s < arity; ++s) {
        const double p = c.table[r * arity + s];
        if (!(p >= 0.0 && p <= 1.0)) in_range = false;
        sum += p;
      }
      if (!in_range || std::fabs(sum - 1.0) > kProbTolerance) {
        report.violations.push_back(
            {ErrorCode::CptRowNotNormalized,
             "child " + std::to_string(c.child) + " row " + std::to_string(r) + " sums to " +
                 text::format_double(sum)});
      }
    }
  }
  return report;
}

void require_valid(const BayesNet& net) {
  const auto report = validate_network(net);
  if (!report.ok()) throw Error(report.violations.front().code, report.violations.front().message);
}

std::vector<VarId> topological_order(const BayesNet& net) {
  const std::size_t n = net.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& c : net.cpts()) indegree[c.child] = c.parents.size();
  std::set<VarId> ready;
  for (VarId v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(v);
  }
  std::vector<VarId> order;
  order.reserve(n);
  while (!ready.empty()) {
    const VarId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (const auto& c : net.cpts()) {
      for (VarId p : c.parents) {
        if (p == v && --indegree[c.child] == 0) ready.insert(c.child);
      }
    }
  }
  if (order.size() != n) throw Error(ErrorCode::CyclicGraph, "edge relation contains a cycle");
  return order;
}

std::optional<std::size_t> Evidence::get(VarId var) const {
  const auto it = values_.find(var);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void Evidence::check_against(const BayesNet& net) const {
  for (const auto& [var, state] : values_) {
    if (var >= net.size()) {
      throw Error(ErrorCode::UnknownVariable, "evidence on variable " + std::to_string(var));
    }
    if (state >= net.arity(var)) {
      throw Error(ErrorCode::ArityMismatch, "evidence state " + std::to_string(state) +
                                                " out of range for '" + net.variable(var).name +
                                                "'");
    }
  }
}

std::size_t Posterior::argmax() const {
  return static_cast<std::size_t>(
      std::max_element(probabilities.begin(), probabilities.end()) - probabilities.begin());
}

double joint_probability(const BayesNet& net, const Evidence& full_assignment) {
  if (full_assignment.size() != net.size()) {
    throw Error(ErrorCode::IncompleteAssignment,
                "assignment covers " + std::to_string(full_assignment.size()) + " of " +
                    std::to_string(net.size()) + " variables");
  }
  full_assignment.check_against(net);
  double product = 1.0;
  for (const auto& c : net.cpts()) {
    std::size_t row = 0;
    for (VarId p : c.parents) row = row * net.arity(p) + *full_assignment.get(p);
    product *= c.table[row * net.arity(c.child) + *full_assignment.get(c.child)];
  }
  return product;
}

}  // namespace mids::bayes
