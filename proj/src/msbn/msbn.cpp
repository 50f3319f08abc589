#include "mids/msbn/msbn.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mids/bayes/junction_tree.hpp"
#include "mids/common/text.hpp"

namespace mids::msbn {

const SubnetSpec& Msbn::subnet(SubnetId id) const {
  if (id >= subnets_.size()) {
    throw Error(ErrorCode::InvalidArgument, "no subnet " + std::to_string(id));
  }
  return subnets_[id];
}

const Dsepset* Msbn::dsepset(SubnetId a, SubnetId b) const {
  if (a > b) std::swap(a, b);
  for (const auto& d : dsepsets_) {
    if (d.a == a && d.b == b) return &d;
  }
  return nullptr;
}

std::vector<VarId> Msbn::owned_cpts(SubnetId id) const {
  std::vector<VarId> out;
  for (VarId v = 0; v < owner_.size(); ++v) {
    if (owner_[v] == id) out.push_back(v);
  }
  return out;
}

bool Msbn::contains(SubnetId id, VarId v) const {
  const auto& vars = subnet(id).variables;
  return std::binary_search(vars.begin(), vars.end(), v);
}

std::vector<SubnetId> Msbn::holders(VarId v) const {
  std::vector<SubnetId> out;
  for (const auto& s : subnets_) {
    if (std::binary_search(s.variables.begin(), s.variables.end(), v)) out.push_back(s.id);
  }
  return out;
}

namespace {

bool connected_within(const std::vector<std::set<SubnetId>>& adj, const std::vector<SubnetId>& nodes) {
  if (nodes.empty()) return true;
  const std::set<SubnetId> allowed(nodes.begin(), nodes.end());
  std::set<SubnetId> seen{nodes.front()};
  std::vector<SubnetId> stack{nodes.front()};
  while (!stack.empty()) {
    const auto s = stack.back();
    stack.pop_back();
    for (auto u : adj[s]) {
      if (allowed.count(u) && seen.insert(u).second) stack.push_back(u);
    }
  }
  return seen.size() == nodes.size();
}

bool subset_of(const std::vector<VarId>& small, const std::vector<VarId>& sorted_big) {
  return std::all_of(small.begin(), small.end(), [&](VarId v) {
    return std::binary_search(sorted_big.begin(), sorted_big.end(), v);
  });
}

}  // namespace

Msbn section_network(const bayes::BayesNet& net, std::vector<SubnetSpec> specs) {
  bayes::require_valid(net);
  std::sort(specs.begin(), specs.end(), [](const auto& x, const auto& y) { return x.id < y.id; });
  const std::size_t k = specs.size();
  if (k == 0) throw Error(ErrorCode::UncoveredVariable, "no subnets declared");
  for (std::size_t i = 0; i < k; ++i) {
    if (specs[i].id != i) {
      throw Error(ErrorCode::InvalidArgument, "subnet ids must be 0.." + std::to_string(k - 1));
    }
  }

  std::vector<std::set<SubnetId>> adj(k);
  for (auto& s : specs) {
    std::sort(s.variables.begin(), s.variables.end());
    s.variables.erase(std::unique(s.variables.begin(), s.variables.end()), s.variables.end());
    for (VarId v : s.variables) {
      if (v >= net.size()) throw Error(ErrorCode::UnknownVariable, "subnet variable " + std::to_string(v));
    }
    for (SubnetId n : s.neighbors) {
      if (n >= k || n == s.id) {
        throw Error(ErrorCode::NotHypertree, "subnet " + std::to_string(s.id) + " links to invalid subnet " + std::to_string(n));
      }
      adj[s.id].insert(n);
      adj[n].insert(s.id);
    }
  }
  for (auto& s : specs) s.neighbors.assign(adj[s.id].begin(), adj[s.id].end());

  Msbn m;
  m.net_ = net;
  m.subnets_ = std::move(specs);

  for (VarId v = 0; v < net.size(); ++v) {
    if (m.holders(v).empty()) {
      throw Error(ErrorCode::UncoveredVariable, "variable '" + net.variable(v).name + "' is in no subnet");
    }
  }

  std::size_t link_count = 0;
  for (const auto& a : adj) link_count += a.size();
  link_count /= 2;
  std::vector<SubnetId> all(k);
  for (SubnetId i = 0; i < k; ++i) all[i] = i;
  if (link_count != k - 1 || !connected_within(adj, all)) {
    throw Error(ErrorCode::NotHypertree, "subnet link graph is not a tree");
  }
  for (VarId v = 0; v < net.size(); ++v) {
    if (!connected_within(adj, m.holders(v))) {
      throw Error(ErrorCode::NotHypertree, "subnets holding '" + net.variable(v).name +
                                               "' are not connected in the link tree");
    }
  }

  for (SubnetId a = 0; a < k; ++a) {
    for (SubnetId b : adj[a]) {
      if (b < a) continue;
      Dsepset d{a, b, {}};
      const auto& va = m.subnets_[a].variables;
      const auto& vb = m.subnets_[b].variables;
      std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(d.variables));
      if (d.variables.empty()) {
        throw Error(ErrorCode::NotHypertree, "linked subnets " + std::to_string(a) + " and " +
                                                 std::to_string(b) + " share no variables");
      }
      m.dsepsets_.push_back(std::move(d));
    }
  }

  m.owner_.resize(net.size());
  for (VarId v = 0; v < net.size(); ++v) {
    std::vector<VarId> family = net.cpt(v).parents;
    family.push_back(v);
    std::optional<SubnetId> owner;
    for (const auto& s : m.subnets_) {
      if (subset_of(family, s.variables)) {
        owner = s.id;
        break;
      }
    }
    if (!owner) {
      throw Error(ErrorCode::UnsoundDsepset, "no subnet contains '" + net.variable(v).name +
                                                 "' together with all of its parents");
    }
    m.owner_[v] = *owner;
  }

  for (const auto& d : m.dsepsets_) {
    for (VarId x : d.variables) {
      const auto& parents = net.cpt(x).parents;
      if (!subset_of(parents, m.subnets_[d.a].variables) && !subset_of(parents, m.subnets_[d.b].variables)) {
        throw Error(ErrorCode::UnsoundDsepset,
                    "shared variable '" + net.variable(x).name + "' between subnets " + std::to_string(d.a) +
                        " and " + std::to_string(d.b) + " has its parents split across them");
      }
    }
  }
  return m;
}

Msbn auto_section(const bayes::BayesNet& net, std::size_t count) {
  const auto jt = bayes::compile(net);
  const std::size_t n = jt.clusters().size();
  count = std::max<std::size_t>(1, std::min(count, n));

  for (std::size_t groups = count; groups >= 1; --groups) {
    // Post-order over the cluster tree from cluster 0; close a group whenever
    // the pending subtree reaches the target size.
    const std::size_t target = (n + groups - 1) / groups;
    std::vector<std::size_t> parent(n, n), order;
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
      const auto c = stack.back();
      stack.pop_back();
      order.push_back(c);
      for (const auto& [nb, _] : jt.neighbors(c)) {
        if (!seen[nb]) {
          seen[nb] = true;
          parent[nb] = c;
          stack.push_back(nb);
        }
      }
    }
    std::vector<std::size_t> group(n, n);
    std::vector<std::size_t> pending(n, 1);
    std::size_t next_group = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const auto c = *it;
      if (c == 0) break;
      if (pending[c] >= target && next_group + 1 < groups) {
        // Assign c's whole unassigned subtree.
        std::vector<std::size_t> todo{c};
        while (!todo.empty()) {
          const auto x = todo.back();
          todo.pop_back();
          if (group[x] != n) continue;
          group[x] = next_group;
          for (const auto& [nb, _] : jt.neighbors(x)) {
            if (parent[nb] == x) todo.push_back(nb);
          }
        }
        ++next_group;
      } else {
        pending[parent[c]] += pending[c];
      }
    }
    for (auto& g : group) {
      if (g == n) g = next_group;
    }
    const std::size_t made = next_group + 1;

    // Renumber so the group holding cluster 0 is subnet 0, then by first cluster.
    std::vector<std::size_t> rename(made, made);
    std::size_t fresh = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (rename[group[c]] == made) rename[group[c]] = fresh++;
    }
    std::vector<SubnetSpec> specs(made);
    for (std::size_t i = 0; i < made; ++i) specs[i].id = static_cast<SubnetId>(i);
    for (std::size_t c = 0; c < n; ++c) {
      auto& s = specs[rename[group[c]]];
      s.variables.insert(s.variables.end(), jt.clusters()[c].begin(), jt.clusters()[c].end());
    }
    for (const auto& sep : jt.separators()) {
      const auto ga = rename[group[sep.a]], gb = rename[group[sep.b]];
      if (ga != gb) specs[ga].neighbors.push_back(static_cast<SubnetId>(gb));
    }
    try {
      return section_network(net, specs);
    } catch (const Error&) {
      if (groups == 1) throw;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unreachable");
}

std::vector<SubnetSpec> parse_sectioning(std::string_view contents, const bayes::BayesNet& net) {
  enum class Section { None, Subnets, Links } section = Section::None;
  std::map<SubnetId, SubnetSpec> specs;
  std::vector<std::pair<SubnetId, SubnetId>> links;
  std::size_t line_no = 0;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    if (line == "subnets") {
      section = Section::Subnets;
      continue;
    }
    if (line == "links") {
      section = Section::Links;
      continue;
    }
    const std::string where = "sectioning line " + std::to_string(line_no);
    if (section == Section::Subnets) {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) throw Error(ErrorCode::ParseError, where + ": expected '<id>: <names>'");
      const auto id = static_cast<SubnetId>(text::parse_uint(line.substr(0, colon), "subnet id"));
      SubnetSpec spec{id, {}, {}};
      for (auto name : text::split_ws(line.substr(colon + 1))) spec.variables.push_back(net.require(name));
      if (!specs.emplace(id, std::move(spec)).second) throw Error(ErrorCode::ParseError, where + ": duplicate subnet");
    } else if (section == Section::Links) {
      const auto f = text::split_ws(line);
      if (f.size() != 2) throw Error(ErrorCode::ParseError, where + ": expected '<id> <id>'");
      links.emplace_back(static_cast<SubnetId>(text::parse_uint(f[0], "subnet")),
                         static_cast<SubnetId>(text::parse_uint(f[1], "subnet")));
    } else {
      throw Error(ErrorCode::ParseError, where + ": content before a section header");
    }
  }
  for (const auto& [a, b] : links) {
    if (!specs.count(a) || !specs.count(b)) throw Error(ErrorCode::NotHypertree, "link names an undeclared subnet");
    specs[a].neighbors.push_back(b);
  }
  std::vector<SubnetSpec> out;
  for (auto& [_, s] : specs) out.push_back(std::move(s));
  return out;
}

std::string serialize_sectioning(const Msbn& m) {
  std::string out = "subnets\n";
  for (const auto& s : m.subnets()) {
    out += std::to_string(s.id) + ':';
    for (VarId v : s.variables) out += ' ' + m.net().variable(v).name;
    out += '\n';
  }
  out += "links\n";
  for (const auto& d : m.dsepsets()) out += std::to_string(d.a) + ' ' + std::to_string(d.b) + '\n';
  return out;
}

Msbn load_sectioning(const std::filesystem::path& path, const bayes::BayesNet& net) {
  return section_network(net, parse_sectioning(text::read_file(path), net));
}

}  // namespace mids::msbn
