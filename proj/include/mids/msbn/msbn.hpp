#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mids/bayes/network.hpp"

namespace mids::msbn {

using bayes::VarId;
using SubnetId = std::uint32_t;

struct SubnetSpec {
  SubnetId id = 0;
  std::vector<VarId> variables;
  std::vector<SubnetId> neighbors;
};

// Variables shared by two adjacent subnets (a < b).
struct Dsepset {
  SubnetId a = 0;
  SubnetId b = 0;
  std::vector<VarId> variables;
};

// A global network sectioned into subnets linked as a tree. Every CPT belongs
// to exactly one subnet: the lowest-id subnet holding the child and all of
// its parents.
class Msbn {
 public:
  const bayes::BayesNet& net() const { return net_; }
  const std::vector<SubnetSpec>& subnets() const { return subnets_; }
  const SubnetSpec& subnet(SubnetId id) const;
  std::size_t subnet_count() const { return subnets_.size(); }
  const std::vector<Dsepset>& dsepsets() const { return dsepsets_; }
  // nullptr unless a and b are adjacent.
  const Dsepset* dsepset(SubnetId a, SubnetId b) const;
  SubnetId cpt_owner(VarId child) const { return owner_[child]; }
  std::vector<VarId> owned_cpts(SubnetId id) const;
  bool contains(SubnetId id, VarId v) const;
  // Subnets holding v, ascending.
  std::vector<SubnetId> holders(VarId v) const;

  friend Msbn section_network(const bayes::BayesNet&, std::vector<SubnetSpec>);

 private:
  bayes::BayesNet net_;
  std::vector<SubnetSpec> subnets_;
  std::vector<Dsepset> dsepsets_;
  std::vector<SubnetId> owner_;
};

// Validates and builds the sectioning. Neighbor lists may name each link from
// either side. Throws UncoveredVariable, NotHypertree (link graph not a tree,
// a variable's holders not connected, or an empty d-sepset), UnsoundDsepset.
Msbn section_network(const bayes::BayesNet& net, std::vector<SubnetSpec> specs);

// Splits the net's global junction tree into up to `count` connected groups
// and sections along them; retries with fewer groups until the result is
// sound. Deterministic.
Msbn auto_section(const bayes::BayesNet& net, std::size_t count);

// Sectioning file:
//   subnets
//   <id>: <variable name> <variable name> ...
//   links
//   <id> <id>
std::vector<SubnetSpec> parse_sectioning(std::string_view text, const bayes::BayesNet& net);
std::string serialize_sectioning(const Msbn& msbn);
Msbn load_sectioning(const std::filesystem::path& path, const bayes::BayesNet& net);

}  // namespace mids::msbn
