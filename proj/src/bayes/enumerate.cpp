#include "mids/bayes/enumerate.hpp"

namespace mids::bayes {

std::vector<Posterior> brute_force_marginals(const BayesNet& net, const Evidence& e,
                                             std::uint64_t cap) {
  require_valid(net);
  e.check_against(net);
  const std::size_t n = net.size();

  std::uint64_t space = 1;
  for (const auto& v : net.variables()) {
    space *= v.arity();
    if (space > cap) {
      throw Error(ErrorCode::StateSpaceTooLarge,
                  "joint state space exceeds cap " + std::to_string(cap));
    }
  }

  std::vector<std::size_t> state(n, 0);
  std::vector<VarId> free;
  for (VarId v = 0; v < n; ++v) {
    if (auto s = e.get(v)) {
      state[v] = *s;
    } else {
      free.push_back(v);
    }
  }

  std::vector<std::vector<double>> mass(n);
  for (VarId v = 0; v < n; ++v) mass[v].assign(net.arity(v), 0.0);
  double total = 0.0;

  while (true) {
    double p = 1.0;
    for (const auto& c : net.cpts()) {
      std::size_t row = 0;
      for (VarId parent : c.parents) row = row * net.arity(parent) + state[parent];
      p *= c.table[row * net.arity(c.child) + state[c.child]];
    }
    total += p;
    for (VarId v = 0; v < n; ++v) mass[v][state[v]] += p;

    // Odometer over the unobserved variables, last one fastest.
    std::size_t k = free.size();
    while (k > 0) {
      const VarId v = free[k - 1];
      if (++state[v] < net.arity(v)) break;
      state[v] = 0;
      --k;
    }
    if (k == 0) break;
  }

  if (total <= 0.0) throw Error(ErrorCode::ZeroProbabilityEvidence, "P(e) = 0");

  std::vector<Posterior> out(n);
  for (VarId v = 0; v < n; ++v) {
    out[v].variable = v;
    out[v].probabilities = mass[v];
    for (double& x : out[v].probabilities) x /= total;
  }
  return out;
}

Posterior brute_force_posterior(const BayesNet& net, VarId target, const Evidence& e,
                                std::uint64_t cap) {
  if (target >= net.size()) {
    throw Error(ErrorCode::UnknownVariable, "target " + std::to_string(target));
  }
  return brute_force_marginals(net, e, cap)[target];
}

}  // namespace mids::bayes
