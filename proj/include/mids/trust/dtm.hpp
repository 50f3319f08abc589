#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mids/trust/sma.hpp"

namespace mids::trust {

enum class Verdict : std::uint8_t { Safe, Compromised, CompromisedOrDead, Undetermined };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);
inline bool isolates(Verdict v) { return v == Verdict::Compromised || v == Verdict::CompromisedOrDead; }

struct TrustDomain {
  std::size_t size = 0;
  std::string policy = "default";
  std::set<HostId> isolated;
  std::map<HostId, Verdict> verdicts;

  bool is_isolated(HostId h) const { return isolated.count(h) != 0; }
  HostMask isolated_mask() const;
};

TrustDomain make_domain(std::size_t hosts, std::string policy = "default");
// Idempotent. Throws UnknownHost.
void isolate(TrustDomain& domain, HostId host);

// What each host currently suspects about its peers; missing entries mean 0.
class Assessments {
 public:
  void set(HostId by, HostId about, StatusValue v) { entries_[{by, about}] = v; }
  StatusValue get(HostId by, HostId about) const;
  // 1 iff strictly more than half of the non-isolated hosts other than
  // `about` suspect it.
  StatusValue majority(const TrustDomain& domain, HostId about) const;
  const std::map<std::pair<HostId, HostId>, StatusValue>& entries() const { return entries_; }

 private:
  std::map<std::pair<HostId, HostId>, StatusValue> entries_;
};

struct DtmOptions {
  // Treat an all-'0' instance as "compromised or dead" as the case text reads.
  bool literal_case_one = false;
  std::uint64_t key_seed = 1;
  bool record_trace = false;
};

// Silent leader -> CompromisedOrDead; contradictory -> Compromised;
// reports safe -> Compromised if the majority suspects it, else Safe;
// reports compromised -> Compromised if the majority does not suspect it
// (it contradicts the majority), else Undetermined.
Verdict combine(Choice c, StatusValue majority, bool literal_case_one = false);

struct InstanceOutcome {
  HostId leader = 0;
  Choice choice = Choice::LeaderSilent;
  StatusValue majority = 0;
  Verdict verdict = Verdict::Undetermined;
  SmaResult sma;
  std::vector<TraceEvent> trace;
};

struct DtmResult {
  std::vector<InstanceOutcome> instances;
  std::vector<HostId> newly_isolated;
};

// One agreement instance per non-isolated host, each led by that host
// reporting its own status (0). Hosts judged compromised are isolated once
// all instances finish. Throws MajorityAssumptionViolated when more than
// floor((n-1)/2) hosts are configured as traitors.
DtmResult dtm_round(TrustDomain& domain, const std::vector<Behavior>& behaviors, const Assessments& assessments,
                    const DtmOptions& options = {});

struct Scenario {
  std::string name;
  std::size_t hosts = 0;
  std::uint64_t seed = 1;
  std::string policy = "default";
  bool literal_case_one = false;
  std::vector<Behavior> behaviors;
  Assessments assessments;
  std::set<HostId> isolated;
  std::map<HostId, Verdict> expected;
};

// Scenario file, one directive per line ('#' comments):
//   name <text>
//   hosts <n>
//   seed <u64>
//   policy <text>
//   literal_case_one <true|false>
//   behavior <host> <behavior>        (see parse_behavior; default honest)
//   assess <by|*> <about> <0|1>        (* = every other host)
//   isolated <host>
//   expect <host> <Safe|Compromised|CompromisedOrDead|Undetermined>
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

struct ScenarioOutcome {
  TrustDomain domain;
  DtmResult result;
  // Hosts whose verdict differs from `expect`, as "host: expected X, got Y".
  std::vector<std::string> mismatches;
};

ScenarioOutcome run_scenario(const Scenario& s, bool record_trace = true);
// Verdict table followed by the message trace, one line per message.
std::string format_outcome(const Scenario& s, const ScenarioOutcome& o, bool with_trace = true);

}  // namespace mids::trust
