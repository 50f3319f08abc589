#include "mids/trust/dtm.hpp"

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::trust {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "Safe";
    case Verdict::Compromised: return "Compromised";
    case Verdict::CompromisedOrDead: return "CompromisedOrDead";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

Verdict parse_verdict(std::string_view s) {
  for (auto v : {Verdict::Safe, Verdict::Compromised, Verdict::CompromisedOrDead, Verdict::Undetermined}) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::ParseError, "unknown verdict '" + std::string(s) + "'");
}

HostMask TrustDomain::isolated_mask() const {
  HostMask m = 0;
  for (HostId h : isolated) m |= host_bit(h);
  return m;
}

TrustDomain make_domain(std::size_t hosts, std::string policy) {
  if (hosts < 3 || hosts > kMaxHosts) {
    throw Error(ErrorCode::InvalidArgument, "trust domain needs 3.." + std::to_string(kMaxHosts) + " hosts");
  }
  TrustDomain d;
  d.size = hosts;
  d.policy = std::move(policy);
  return d;
}

void isolate(TrustDomain& domain, HostId host) {
  if (host >= domain.size) throw Error(ErrorCode::UnknownHost, "host " + std::to_string(host) + " is not in the domain");
  domain.isolated.insert(host);
}

StatusValue Assessments::get(HostId by, HostId about) const {
  const auto it = entries_.find({by, about});
  return it == entries_.end() ? 0 : it->second;
}

StatusValue Assessments::majority(const TrustDomain& domain, HostId about) const {
  std::size_t voters = 0, suspicious = 0;
  for (HostId h = 0; h < domain.size; ++h) {
    if (h == about || domain.is_isolated(h)) continue;
    ++voters;
    suspicious += get(h, about);
  }
  return 2 * suspicious > voters ? 1 : 0;
}

Verdict combine(Choice c, StatusValue majority, bool literal_case_one) {
  switch (c) {
    case Choice::LeaderSilent: return Verdict::CompromisedOrDead;
    case Choice::LeaderContradictory: return Verdict::Compromised;
    case Choice::LeaderReportsSafe:
      if (literal_case_one) return Verdict::CompromisedOrDead;
      return majority ? Verdict::Compromised : Verdict::Safe;
    case Choice::LeaderReportsCompromised: return majority ? Verdict::Undetermined : Verdict::Compromised;
  }
  return Verdict::Undetermined;
}

DtmResult dtm_round(TrustDomain& domain, const std::vector<Behavior>& behaviors, const Assessments& assessments,
                    const DtmOptions& options) {
  const std::size_t n = domain.size;
  if (behaviors.size() != n) throw Error(ErrorCode::InvalidArgument, "one behavior per host is required");
  std::size_t traitors = 0;
  for (const auto& b : behaviors) traitors += b.traitor() ? 1 : 0;
  if (traitors > (n - 1) / 2) {
    throw Error(ErrorCode::MajorityAssumptionViolated,
                std::to_string(traitors) + " of " + std::to_string(n) + " hosts are compromised");
  }

  DtmResult out;
  SmaEngine engine;
  SmaConfig config{n, 0, 0, behaviors, domain.isolated_mask(), options.key_seed};
  for (HostId leader = 0; leader < n; ++leader) {
    if (domain.is_isolated(leader)) continue;
    InstanceOutcome inst;
    inst.leader = leader;
    config.leader = leader;
    inst.sma = engine.run(config, options.record_trace ? &inst.trace : nullptr);

    // Safe hosts agree, so any one of them speaks for the instance.
    std::optional<std::uint8_t> seen;
    for (HostId h = 0; h < n; ++h) {
      if (h == leader || behaviors[h].traitor() || domain.is_isolated(h)) continue;
      if (seen && *seen != inst.sma.values[h]) {
        throw Error(ErrorCode::InvalidArgument, "safe hosts disagree in instance " + std::to_string(leader));
      }
      seen = inst.sma.values[h];
    }
    inst.majority = assessments.majority(domain, leader);
    if (seen) {
      inst.choice = choice(*seen);
      inst.verdict = combine(inst.choice, inst.majority, options.literal_case_one);
    }
    domain.verdicts[leader] = inst.verdict;
    out.instances.push_back(std::move(inst));
  }
  for (const auto& inst : out.instances) {
    if (isolates(inst.verdict) && !domain.is_isolated(inst.leader)) {
      isolate(domain, inst.leader);
      out.newly_isolated.push_back(inst.leader);
    }
  }
  return out;
}

Scenario parse_scenario(std::string_view contents) {
  Scenario s;
  std::vector<std::pair<std::size_t, std::string>> behavior_lines;
  std::vector<std::tuple<std::optional<HostId>, HostId, StatusValue>> assess_lines;
  std::size_t line_no = 0;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto f = text::split_ws(line);
    const std::string where = "scenario line " + std::to_string(line_no);
    const auto key = f[0];
    const auto rest = text::trim(line.substr(key.size()));
    if (key == "name") {
      s.name = std::string(rest);
    } else if (key == "hosts" && f.size() == 2) {
      s.hosts = text::parse_uint(f[1], "hosts");
    } else if (key == "seed" && f.size() == 2) {
      s.seed = text::parse_uint(f[1], "seed");
    } else if (key == "policy" && f.size() == 2) {
      s.policy = std::string(f[1]);
    } else if (key == "literal_case_one" && f.size() == 2) {
      if (f[1] != "true" && f[1] != "false") throw Error(ErrorCode::ParseError, where + ": expected true or false");
      s.literal_case_one = f[1] == "true";
    } else if (key == "behavior" && f.size() >= 3) {
      const auto host = text::parse_uint(f[1], "host");
      behavior_lines.emplace_back(host, std::string(text::trim(rest.substr(f[1].size()))));
    } else if (key == "assess" && f.size() == 4) {
      std::optional<HostId> by;
      if (f[1] != "*") by = static_cast<HostId>(text::parse_uint(f[1], "assessing host"));
      const auto v = text::parse_uint(f[3], "assessment");
      if (v > 1) throw Error(ErrorCode::ParseError, where + ": assessment must be 0 or 1");
      assess_lines.emplace_back(by, static_cast<HostId>(text::parse_uint(f[2], "assessed host")),
                                static_cast<StatusValue>(v));
    } else if (key == "isolated" && f.size() == 2) {
      s.isolated.insert(static_cast<HostId>(text::parse_uint(f[1], "host")));
    } else if (key == "expect" && f.size() == 3) {
      s.expected[static_cast<HostId>(text::parse_uint(f[1], "host"))] = parse_verdict(f[2]);
    } else {
      throw Error(ErrorCode::ParseError, where + ": cannot read '" + std::string(line) + "'");
    }
  }
  if (s.hosts < 3 || s.hosts > kMaxHosts) {
    throw Error(ErrorCode::ParseError, "scenario needs 'hosts' between 3 and " + std::to_string(kMaxHosts));
  }
  s.behaviors.assign(s.hosts, Behavior::honest());
  for (const auto& [host, text] : behavior_lines) {
    if (host >= s.hosts) throw Error(ErrorCode::UnknownHost, "behavior for host " + std::to_string(host));
    s.behaviors[host] = parse_behavior(text);
  }
  for (const auto& [by, about, v] : assess_lines) {
    if (about >= s.hosts || (by && *by >= s.hosts)) throw Error(ErrorCode::UnknownHost, "assessment names an unknown host");
    for (HostId h = 0; h < s.hosts; ++h) {
      if ((by && h != *by) || h == about) continue;
      s.assessments.set(h, about, v);
    }
  }
  for (HostId h : s.isolated) {
    if (h >= s.hosts) throw Error(ErrorCode::UnknownHost, "isolated host " + std::to_string(h));
  }
  for (const auto& [h, _] : s.expected) {
    if (h >= s.hosts) throw Error(ErrorCode::UnknownHost, "expectation for host " + std::to_string(h));
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(text::read_file(path)); }

ScenarioOutcome run_scenario(const Scenario& s, bool record_trace) {
  ScenarioOutcome o;
  o.domain = make_domain(s.hosts, s.policy);
  for (HostId h : s.isolated) isolate(o.domain, h);
  DtmOptions opt;
  opt.literal_case_one = s.literal_case_one;
  opt.key_seed = s.seed;
  opt.record_trace = record_trace;
  o.result = dtm_round(o.domain, s.behaviors, s.assessments, opt);
  for (const auto& [h, want] : s.expected) {
    const auto it = o.domain.verdicts.find(h);
    const auto got = it == o.domain.verdicts.end() ? std::string("none") : std::string(to_string(it->second));
    if (got != to_string(want)) {
      o.mismatches.push_back(std::to_string(h) + ": expected " + std::string(to_string(want)) + ", got " + got);
    }
  }
  return o;
}

std::string format_outcome(const Scenario& s, const ScenarioOutcome& o, bool with_trace) {
  std::string out;
  if (!s.name.empty()) out += "scenario\t" + s.name + '\n';
  out += "host\tbehavior\tchoice\tmajority\tverdict\tmessages\n";
  for (const auto& inst : o.result.instances) {
    out += std::to_string(inst.leader) + '\t' + to_string(s.behaviors[inst.leader]) + '\t' +
           std::string(to_string(inst.choice)) + '\t' + std::to_string(inst.majority) + '\t' +
           std::string(to_string(inst.verdict)) + '\t' + std::to_string(inst.sma.messages) + '\n';
  }
  out += "isolated";
  for (HostId h : o.domain.isolated) out += ' ' + std::to_string(h);
  out += '\n';
  if (with_trace) {
    out += "trace\tinstance\tround\tsender\trecipient\tvalue\tchain\toutcome\n";
    for (const auto& inst : o.result.instances) {
      for (const auto& e : inst.trace) out += "trace\t" + format_trace_line(inst.leader, e) + '\n';
    }
  }
  return out;
}

}  // namespace mids::trust
