#include "mids/bayes/potential.hpp"

#include <algorithm>

#include "mids/kernels/kernels.hpp"

namespace mids::bayes {

Potential::Potential(std::vector<VarId> vars, std::vector<std::size_t> arities, double fill)
    : vars_(std::move(vars)), arities_(std::move(arities)) {
  std::size_t n = 1;
  for (std::size_t a : arities_) n *= a;
  values_.assign(n, fill);
}

Potential Potential::over(const BayesNet& net, std::vector<VarId> vars, double fill) {
  std::sort(vars.begin(), vars.end());
  std::vector<std::size_t> arities;
  arities.reserve(vars.size());
  for (VarId v : vars) arities.push_back(net.arity(v));
  return Potential(std::move(vars), std::move(arities), fill);
}

Potential Potential::from_cpt(const BayesNet& net, VarId child) {
  const Cpt& cpt = net.cpt(child);
  std::vector<VarId> family = cpt.parents;
  family.push_back(child);
  Potential pot = over(net, family, 0.0);

  // Walk the sorted table and look each entry up in the CPT layout.
  std::vector<std::size_t> state(pot.vars_.size(), 0);
  std::vector<std::size_t> position(net.size(), 0);
  for (std::size_t i = 0; i < pot.vars_.size(); ++i) position[pot.vars_[i]] = i;
  const std::size_t child_arity = net.arity(child);
  for (std::size_t flat = 0; flat < pot.values_.size(); ++flat) {
    std::size_t row = 0;
    for (VarId p : cpt.parents) row = row * net.arity(p) + state[position[p]];
    pot.values_[flat] = cpt.table[row * child_arity + state[position[child]]];
    for (std::size_t k = state.size(); k-- > 0;) {
      if (++state[k] < pot.arities_[k]) break;
      state[k] = 0;
    }
  }
  return pot;
}

bool Potential::contains(VarId v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

bool Potential::contains_all(std::span<const VarId> vars) const {
  return std::all_of(vars.begin(), vars.end(), [this](VarId v) { return contains(v); });
}

std::vector<std::uint32_t> Potential::index_map(std::span<const VarId> subset) const {
  // Stride of each of our variables inside the subset table (0 if absent).
  std::vector<std::size_t> sub_stride(vars_.size(), 0);
  {
    std::size_t stride = 1;
    for (std::size_t k = subset.size(); k-- > 0;) {
      const auto it = std::lower_bound(vars_.begin(), vars_.end(), subset[k]);
      if (it == vars_.end() || *it != subset[k]) {
        throw Error(ErrorCode::UnknownVariable,
                    "variable " + std::to_string(subset[k]) + " not in potential scope");
      }
      const auto pos = static_cast<std::size_t>(it - vars_.begin());
      sub_stride[pos] = stride;
      stride *= arities_[pos];
    }
  }
  std::vector<std::uint32_t> map(values_.size());
  std::vector<std::size_t> state(vars_.size(), 0);
  std::size_t sub_index = 0;
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    map[flat] = static_cast<std::uint32_t>(sub_index);
    for (std::size_t k = state.size(); k-- > 0;) {
      if (++state[k] < arities_[k]) {
        sub_index += sub_stride[k];
        break;
      }
      sub_index -= sub_stride[k] * (arities_[k] - 1);
      state[k] = 0;
    }
  }
  return map;
}

void Potential::multiply(const Potential& factor) { multiply(factor, index_map(factor.vars_)); }

void Potential::multiply(const Potential& factor, std::span<const std::uint32_t> index) {
  kernels::multiply_gather(values_, factor.values_, index);
}

Potential Potential::marginalize(std::span<const VarId> keep) const {
  std::vector<VarId> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  return marginalize(sorted, index_map(sorted));
}

Potential Potential::marginalize(std::span<const VarId> keep,
                                 std::span<const std::uint32_t> index) const {
  std::vector<VarId> vars(keep.begin(), keep.end());
  std::vector<std::size_t> arities;
  for (VarId v : vars) {
    const auto pos = std::lower_bound(vars_.begin(), vars_.end(), v) - vars_.begin();
    arities.push_back(arities_[static_cast<std::size_t>(pos)]);
  }
  Potential out(std::move(vars), std::move(arities), 0.0);
  kernels::scatter_add(out.values_, values_, index);
  return out;
}

void Potential::enter_evidence(VarId var, std::size_t state) {
  const auto it = std::lower_bound(vars_.begin(), vars_.end(), var);
  if (it == vars_.end() || *it != var) return;
  const auto pos = static_cast<std::size_t>(it - vars_.begin());
  std::size_t inner = 1;
  for (std::size_t k = pos + 1; k < arities_.size(); ++k) inner *= arities_[k];
  const std::size_t arity = arities_[pos];
  for (std::size_t flat = 0; flat < values_.size(); ++flat) {
    if ((flat / inner) % arity != state) values_[flat] = 0.0;
  }
}

double Potential::total() const { return kernels::sum(values_); }

void Potential::normalize() {
  const double t = total();
  if (!(t > 0.0)) throw Error(ErrorCode::ZeroProbabilityEvidence, "potential has zero mass");
  kernels::scale(values_, 1.0 / t);
}

}  // namespace mids::bayes
