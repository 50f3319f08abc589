#include "mids/trust/sma.hpp"

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::trust {

namespace {

constexpr std::uint32_t kNoNode = UINT32_MAX;

}  // namespace

Behavior parse_behavior(std::string_view line) {
  const auto f = text::split_ws(line);
  if (f.empty()) throw Error(ErrorCode::ParseError, "empty behavior");
  const auto kind = f[0];
  if (kind == "honest" && f.size() == 1) return Behavior::honest();
  if (kind == "silent" && f.size() == 1) return Behavior::silent();
  if (kind == "lie" && f.size() == 2) {
    const auto v = text::parse_uint(f[1], "lie value");
    if (v > 1) throw Error(ErrorCode::ParseError, "lie value must be 0 or 1");
    return Behavior::lie(static_cast<StatusValue>(v));
  }
  if (kind == "drop" && f.size() == 3) {
    const double p = text::parse_double(f[1], "drop probability");
    if (p < 0 || p > 1) throw Error(ErrorCode::ParseError, "drop probability outside [0,1]");
    return Behavior::drop(p, text::parse_uint(f[2], "drop seed"));
  }
  if (kind == "split") {
    HostMask ones = 0, sent = 0;
    for (std::size_t i = 1; i < f.size(); ++i) {
      const auto colon = f[i].find(':');
      if (colon == std::string_view::npos) throw Error(ErrorCode::ParseError, "split entry needs host:value");
      const auto host = text::parse_uint(f[i].substr(0, colon), "split host");
      if (host >= kMaxHosts) throw Error(ErrorCode::ParseError, "split host out of range");
      const auto v = f[i].substr(colon + 1);
      if (v == "-") continue;
      if (v != "0" && v != "1") throw Error(ErrorCode::ParseError, "split value must be 0, 1 or -");
      sent |= host_bit(static_cast<HostId>(host));
      if (v == "1") ones |= host_bit(static_cast<HostId>(host));
    }
    return Behavior::split(ones, ~sent);
  }
  throw Error(ErrorCode::ParseError, "unknown behavior '" + std::string(line) + "'");
}

std::string to_string(const Behavior& b) {
  switch (b.kind) {
    case Behavior::Kind::Honest: return "honest";
    case Behavior::Kind::Silent: return "silent";
    case Behavior::Kind::ConstantLie: return "lie " + std::to_string(b.value);
    case Behavior::Kind::DropRelay: return "drop " + text::format_double(b.drop_probability) + ' ' + std::to_string(b.seed);
    case Behavior::Kind::SplitSend: {
      std::string out = "split";
      for (HostId h = 0; h < kMaxHosts; ++h) {
        if (b.skip & host_bit(h)) continue;
        out += ' ' + std::to_string(h) + ((b.ones & host_bit(h)) ? ":1" : ":0");
      }
      return out;
    }
  }
  return "?";
}

Choice choice(std::uint8_t values) {
  switch (values & 3) {
    case 0: return Choice::LeaderSilent;
    case 1: return Choice::LeaderReportsSafe;
    case 2: return Choice::LeaderReportsCompromised;
    default: return Choice::LeaderContradictory;
  }
}

std::string_view to_string(Choice c) {
  switch (c) {
    case Choice::LeaderSilent: return "LeaderSilent";
    case Choice::LeaderReportsSafe: return "LeaderReportsSafe";
    case Choice::LeaderReportsCompromised: return "LeaderReportsCompromised";
    case Choice::LeaderContradictory: return "LeaderContradictory";
  }
  return "?";
}

std::string_view to_string(Delivery d) {
  switch (d) {
    case Delivery::Accepted: return "accepted";
    case Delivery::Duplicate: return "duplicate";
    case Delivery::InvalidSignatureDropped: return "InvalidSignatureDropped";
    case Delivery::Rejected: return "rejected";
    case Delivery::IsolatedDropped: return "isolated";
  }
  return "?";
}

std::string format_trace_line(HostId instance, const TraceEvent& e) {
  return std::to_string(instance) + '\t' + std::to_string(e.round) + '\t' + std::to_string(e.sender) + '\t' +
         std::to_string(e.recipient) + '\t' + std::to_string(e.value) + '\t' + std::to_string(e.chain_length) +
         '\t' + std::string(to_string(e.outcome));
}

std::uint32_t SmaEngine::make_node(std::uint32_t parent, HostId host, StatusValue value) {
  Node n{};
  n.host = static_cast<std::uint8_t>(host);
  n.creator = static_cast<std::uint8_t>(host);
  n.value = value;
  n.parent = parent;
  if (parent == kNoNode) {
    n.token = link_token(keys_[host], 0, value, host);
    n.mask = host_bit(host);
    n.length = 1;
    n.valid = true;
  } else {
    const Node& p = nodes_[parent];
    // A chain only verifies if every earlier link signed this same value.
    n.token = link_token(keys_[host], p.token, value, host);
    n.mask = p.mask | host_bit(host);
    n.length = static_cast<std::uint8_t>(p.length + 1);
    n.valid = p.valid && p.value == value && !(p.mask & host_bit(host));
  }
  nodes_.push_back(n);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

void SmaEngine::send(HostId from, HostId to, std::uint32_t node) {
  outbox_.push_back({node, static_cast<std::uint8_t>(from), static_cast<std::uint8_t>(to)});
  ++result_.messages;
}

void SmaEngine::originate(const SmaConfig& c) {
  const HostId leader = c.leader;
  const Behavior& b = c.behaviors[leader];
  std::uint32_t node[2] = {kNoNode, kNoNode};
  auto node_for = [&](StatusValue v) {
    if (node[v] == kNoNode) node[v] = make_node(kNoNode, leader, v);
    return node[v];
  };
  for (HostId k = 0; k < c.hosts; ++k) {
    if (k == leader || (c.isolated & host_bit(k))) continue;
    switch (b.kind) {
      case Behavior::Kind::Honest: send(leader, k, node_for(c.leader_value)); break;
      case Behavior::Kind::Silent: break;
      case Behavior::Kind::ConstantLie: send(leader, k, node_for(b.value)); break;
      case Behavior::Kind::SplitSend:
        if (!(b.skip & host_bit(k))) send(leader, k, node_for((b.ones & host_bit(k)) ? 1 : 0));
        break;
      case Behavior::Kind::DropRelay:
        if (!drop_rngs_[static_cast<std::size_t>(drop_index_[leader])].bernoulli(b.drop_probability)) {
          send(leader, k, node_for(c.leader_value));
        }
        break;
    }
  }
}

void SmaEngine::relay(const SmaConfig& c, const Pending& p) {
  const HostId j = p.host;
  const Behavior& b = c.behaviors[j];
  if (b.kind == Behavior::Kind::Silent) return;
  const StatusValue held = nodes_[p.node].value;
  const HostMask chain = nodes_[p.node].mask;
  std::uint32_t node[2] = {kNoNode, kNoNode};
  auto node_for = [&](StatusValue v) {
    if (node[v] == kNoNode) node[v] = make_node(p.node, j, v);
    return node[v];
  };
  for (HostId k = 0; k < c.hosts; ++k) {
    if (k == j || (chain & host_bit(k))) continue;
    switch (b.kind) {
      case Behavior::Kind::Honest:
        if (!(c.isolated & host_bit(k))) send(j, k, node_for(held));
        break;
      case Behavior::Kind::DropRelay:
        if (!(c.isolated & host_bit(k)) &&
            !drop_rngs_[static_cast<std::size_t>(drop_index_[j])].bernoulli(b.drop_probability)) {
          send(j, k, node_for(held));
        }
        break;
      case Behavior::Kind::ConstantLie: send(j, k, node_for(b.value)); break;
      case Behavior::Kind::SplitSend:
        if (!(b.skip & host_bit(k))) send(j, k, node_for((b.ones & host_bit(k)) ? 1 : 0));
        break;
      case Behavior::Kind::Silent: break;
    }
  }
}

void SmaEngine::deliver(const SmaConfig& c, const Message& m, std::uint32_t round,
                        std::vector<TraceEvent>* trace) {
  const Node& n = nodes_[m.node];
  Delivery outcome;
  if ((c.isolated & host_bit(m.from)) || (c.isolated & host_bit(m.to))) {
    outcome = Delivery::IsolatedDropped;
    ++result_.isolated_dropped;
  } else if (!n.valid) {
    outcome = Delivery::InvalidSignatureDropped;
    ++result_.invalid_dropped;
  } else if (n.length != round + 1 || n.host != m.from || (n.mask & host_bit(m.to)) ||
             !(n.mask & host_bit(c.leader))) {
    outcome = Delivery::Rejected;
  } else if (result_.values[m.to] & (1u << n.value)) {
    outcome = Delivery::Duplicate;
  } else {
    outcome = Delivery::Accepted;
    result_.values[m.to] |= static_cast<std::uint8_t>(1u << n.value);
    next_pending_.push_back({m.node, m.to});
    for (std::uint32_t i = m.node; i != kNoNode; i = nodes_[i].parent) {
      const Node& link = nodes_[i];
      if (!c.behaviors[link.host].traitor() && link.creator != link.host) result_.unforgeable = false;
    }
  }
  if (trace) trace->push_back({round, m.from, m.to, n.value, n.length, outcome});
}

const SmaResult& SmaEngine::run(const SmaConfig& c, std::vector<TraceEvent>* trace) {
  if (c.hosts < 3 || c.hosts > kMaxHosts) {
    throw Error(ErrorCode::InvalidArgument, "signed agreement needs 3.." + std::to_string(kMaxHosts) + " hosts");
  }
  if (c.behaviors.size() != c.hosts || c.leader >= c.hosts || c.leader_value > 1) {
    throw Error(ErrorCode::InvalidArgument, "agreement config does not match the host count");
  }
  if (keys_seed_ != c.key_seed || keys_count_ < c.hosts) {
    const KeyRing ring(c.key_seed);
    for (HostId h = 0; h < kMaxHosts; ++h) keys_[h] = ring.key(h);
    keys_seed_ = c.key_seed;
    keys_count_ = kMaxHosts;
  }
  nodes_.clear();
  outbox_.clear();
  pending_.clear();
  next_pending_.clear();
  result_.values.assign(c.hosts, 0);
  result_.messages = 0;
  result_.invalid_dropped = 0;
  result_.isolated_dropped = 0;
  result_.unforgeable = true;

  drop_rngs_.clear();
  drop_index_.assign(c.hosts, -1);
  for (HostId h = 0; h < c.hosts; ++h) {
    if (c.behaviors[h].kind == Behavior::Kind::DropRelay) {
      drop_index_[h] = static_cast<int>(drop_rngs_.size());
      drop_rngs_.emplace_back(derive_seed(c.behaviors[h].seed, h));
    }
  }

  originate(c);
  for (std::uint32_t round = 0; round < c.hosts; ++round) {
    next_pending_.clear();
    for (const auto& m : outbox_) deliver(c, m, round, trace);
    outbox_.clear();
    std::swap(pending_, next_pending_);
    if (round + 1 == c.hosts) break;
    for (const auto& p : pending_) relay(c, p);
  }
  return result_;
}

SmaResult run_sma(const SmaConfig& config, std::vector<TraceEvent>* trace) {
  SmaEngine engine;
  return engine.run(config, trace);
}

}  // namespace mids::trust
