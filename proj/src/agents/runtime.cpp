#include "mids/agents/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "mids/common/error.hpp"
#include "mids/common/rng.hpp"
#include "mids/common/text.hpp"
#include "mids/detect/learn.hpp"
#include "mids/msbn/ljf.hpp"
#include "mids/trust/dtm.hpp"

namespace mids::agents {

namespace {

using msbn::SubnetId;
using simnet::Tick;

constexpr double kMirrorTolerance = 1e-9;

std::string link_content(std::size_t epoch, SubnetId from, SubnetId to, const std::string& potential) {
  return std::to_string(epoch) + ' ' + std::to_string(from) + '>' + std::to_string(to) + ' ' + potential;
}

std::uint64_t seal(const trust::KeyRing& keys, HostId host, std::string_view content) {
  return mix64(keys.key(host) ^ text::fnv1a(content));
}

// All mass on the configuration the honest message finds least likely.
bayes::Potential skew(const bayes::Potential& honest) {
  bayes::Potential out = honest;
  const auto v = out.values();
  const auto worst = static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  std::fill(v.begin(), v.end(), 0.0);
  v[worst] = 1.0;
  return out;
}

struct ImAgent {
  AgentId id;
  HostId host = 0;
  SubnetId subnet = 0;
  AgentId peer;
  msbn::LinkedJunctionForest ljf;
  std::optional<std::size_t> epoch;
  std::set<SubnetId> heard;
  bool sent_up = false;
  std::map<SubnetId, bayes::Potential> computed;  // by destination, this epoch
  std::map<SubnetId, WireMessage> mirrored;       // peer's copies awaiting comparison
};

struct SmAgent {
  AgentId id;
  HostId host = 0;
  SubnetId subnet = 0;
  std::vector<VarId> variables;
  std::vector<bayes::Posterior> observation;
};

class Runtime {
 public:
  Runtime(const msbn::Msbn& m, const detect::DiscreteDataset& records, const RuntimeConfig& config)
      : msbn_(m),
        records_(records),
        config_(config),
        k_(m.subnet_count()),
        keys_(config.key_seed),
        bus_({2 * m.subnet_count(), config.key_seed, 1, 0}),
        subs_(registry_),
        domain_() {
    config_.policy.validate();
    if (k_ < 2) throw Error(ErrorCode::InvalidArgument, "the runtime needs at least two subnets");
    orient();
    epoch_ticks_ = config_.policy.remote_period;
    // Evidence arrives by offset local_period; collect and distribute take
    // one tick per hypertree level each way, and the proofs one more.
    if (config_.policy.local_period + 1 + 2 * depth_ > epoch_ticks_) {
      throw Error(ErrorCode::InvalidArgument, "epoch of " + std::to_string(epoch_ticks_) +
                                                  " ticks is too short for hypertree depth " + std::to_string(depth_));
    }
    bus_ = Bus({2 * k_, config.key_seed, 1, epoch_ticks_ * (records.rows() + 1)});
    domain_ = trust::make_domain(2 * k_, "ids");
    setup_agents();
    if (config_.compromise) bus_.inject_compromise(*config_.compromise);
  }

  RuntimeReport run() {
    report_.hosts = 2 * k_;
    if (records_.rows() > 0) {
      bus_.run_until(
          epoch_ticks_ * records_.rows(), [&](const simnet::Envelope<WireMessage>& env) { deliver(env); },
          [&](Tick t) { tick(t); });
    }
    report_.trace = bus_.trace().to_text();
    return std::move(report_);
  }

 private:
  void orient() {
    parent_.assign(k_, std::nullopt);
    children_.assign(k_, {});
    std::vector<std::size_t> depth(k_, 0);
    std::function<void(SubnetId, std::optional<SubnetId>)> visit = [&](SubnetId s, std::optional<SubnetId> p) {
      for (SubnetId n : msbn_.subnet(s).neighbors) {
        if (p && n == *p) continue;
        parent_[n] = s;
        children_[s].push_back(n);
        depth[n] = depth[s] + 1;
        depth_ = std::max(depth_, depth[n]);
        visit(n, s);
      }
    };
    visit(0, std::nullopt);
  }

  void setup_agents() {
    registry_.register_agent({"registry", 0, 0, AgentKind::Registry, {}});
    const auto forest = msbn::compile_ljf(msbn_);
    for (SubnetId s = 0; s < k_; ++s) {
      std::vector<VarId> observed;
      for (VarId v : msbn_.subnet(s).variables) {
        if (v != detect::kClassVar) observed.push_back(v);
      }
      for (int copy = 0; copy < 2; ++copy) {
        const HostId host = static_cast<HostId>(copy == 0 ? s : s + k_);
        const std::string tag = std::to_string(s) + (copy == 0 ? "p" : "b");
        SmAgent sm{"sm" + tag, host, s, observed, {}};
        ImAgent im;
        im.id = "im" + tag;
        im.host = host;
        im.subnet = s;
        im.peer = "im" + std::to_string(s) + (copy == 0 ? "b" : "p");
        im.ljf = forest;
        registry_.register_agent({sm.id, host, s, AgentKind::SystemMonitoring, observed});
        registry_.register_agent({im.id, host, s, AgentKind::IntrusionMonitoring, msbn_.subnet(s).variables});
        subs_.subscribe(im.id, sm.id, observed);
        sms_.push_back(std::move(sm));
        ims_.emplace(im.id, std::move(im));
      }
    }
  }

  std::size_t epoch_of(Tick t) const { return static_cast<std::size_t>((t - 1) / epoch_ticks_); }

  // The agent currently speaking for subnet s: its primary while live.
  const ImAgent* active(SubnetId s) const {
    for (const char* tag : {"p", "b"}) {
      const auto id = "im" + std::to_string(s) + tag;
      if (registry_.contains(id)) return &ims_.at(id);
    }
    return nullptr;
  }

  std::vector<const ImAgent*> live_agents(SubnetId s) const {
    std::vector<const ImAgent*> out;
    for (const char* tag : {"p", "b"}) {
      const auto id = "im" + std::to_string(s) + tag;
      if (registry_.contains(id)) out.push_back(&ims_.at(id));
    }
    return out;
  }

  void tick(Tick t) {
    const auto e = epoch_of(t);
    const Tick offset = t - e * epoch_ticks_;
    if (offset == 1) {
      for (auto& sm : sms_) observe(sm, e);
    }
    for (const auto& sm : sms_) {
      if (!registry_.contains(sm.id) || (t % config_.policy.local_period) != 0) continue;
      subs_.publish_beliefs(sm.id, t, config_.policy, bus_, [&](const AgentId&) { return sm.observation; });
    }
    if (offset == epoch_ticks_) finish_epoch(e, t);
  }

  void observe(SmAgent& sm, std::size_t e) {
    sm.observation.clear();
    const auto* row = records_.row(e);
    for (VarId v : sm.variables) {
      const auto f = static_cast<std::size_t>(v - 1);
      bayes::Posterior p{v, std::vector<double>(records_.features[f].states.size(), 0.0)};
      p.probabilities[row[f]] = 1.0;
      sm.observation.push_back(std::move(p));
    }
  }

  void deliver(const simnet::Envelope<WireMessage>& env) {
    const auto& m = env.payload;
    if (m.type == MessageType::Trust) return on_trust(env);
    const auto it = ims_.find(m.recipient);
    if (it == ims_.end() || !registry_.contains(m.recipient)) return;
    auto& im = it->second;
    const auto fields = payload_fields(m.payload);
    if (fields.count("link")) return on_link(im, m, fields);
    on_observation(im, m);
  }

  void on_observation(ImAgent& im, const WireMessage& m) {
    const auto e = epoch_of(m.timestamp);
    if (im.epoch && *im.epoch == e) return;
    im.epoch = e;
    im.heard.clear();
    im.sent_up = false;
    im.computed.clear();
    im.mirrored.clear();
    im.ljf.reset();
    bayes::Evidence ev;
    for (const auto& p : decode_posteriors(m.payload)) {
      const auto state = std::find(p.probabilities.begin(), p.probabilities.end(), 1.0) - p.probabilities.begin();
      ev.set(p.variable, static_cast<std::size_t>(state));
    }
    if (!ev.empty()) im.ljf.enter_evidence({im.subnet, ev});
    if (children_[im.subnet].empty()) send_up_or_down(im);
  }

  // Collect toward subnet 0 once every child has reported; the root turns
  // around and distributes.
  void send_up_or_down(ImAgent& im) {
    const auto s = im.subnet;
    if (im.sent_up) return;
    for (SubnetId c : children_[s]) {
      if (!im.heard.count(c)) return;
    }
    im.sent_up = true;
    if (parent_[s]) {
      send_link(im, *parent_[s]);
    } else {
      for (SubnetId c : children_[s]) send_link(im, c);
    }
  }

  void send_link(ImAgent& im, SubnetId to) {
    const auto honest = im.ljf.linkage_message(im.subnet, to);
    im.ljf.record_sent(im.subnet, to, honest);
    im.computed[to] = honest;
    bayes::Potential out = honest;
    if (const auto c = bus_.compromise(im.host); c && c->skew_beliefs) out = skew(honest);
    const auto e = *im.epoch;
    const auto encoded = encode_potential(out);
    const auto sig = seal(keys_, im.host, link_content(e, im.subnet, to, encoded));
    const auto payload = [&](bool mirror) {
      return "link=" + std::to_string(im.subnet) + '>' + std::to_string(to) + " epoch=" + std::to_string(e) +
             " mirror=" + (mirror ? "1" : "0") + " seal=" + text::hex64(sig) + ' ' + encoded;
    };
    const auto* act = active(im.subnet);
    if (act == &im) {
      for (const auto* dst : live_agents(to)) {
        bus_.schedule(im.host, dst->host, {MessageType::Belief, im.id, dst->id, bus_.now(), payload(false)});
      }
    }
    if (registry_.contains(im.peer)) {
      const auto& peer = ims_.at(im.peer);
      bus_.schedule(im.host, peer.host, {MessageType::Belief, im.id, peer.id, bus_.now(), payload(true)});
    }
    if (const auto it = im.mirrored.find(to); it != im.mirrored.end()) {
      const auto pending = it->second;
      im.mirrored.erase(it);
      compare(im, pending);
    }
  }

  void on_link(ImAgent& im, const WireMessage& m, const std::map<std::string, std::string>& fields) {
    const auto& link = fields.at("link");
    const auto gt = link.find('>');
    const auto from = static_cast<SubnetId>(text::parse_uint(link.substr(0, gt), "subnet"));
    const auto to = static_cast<SubnetId>(text::parse_uint(link.substr(gt + 1), "subnet"));
    const auto e = text::parse_uint(fields.at("epoch"), "epoch");
    if (!im.epoch || *im.epoch != e) {
      bus_.trace().append(bus_.now(), simnet::EventKind::Warning, im.id + " dropped a stale belief from " + m.sender);
      return;
    }
    if (fields.at("mirror") == "1") {
      if (im.computed.count(to)) return compare(im, m);
      im.mirrored[to] = m;
      return;
    }
    if (to != im.subnet) return;
    try {
      im.ljf.absorb_message(from, to, decode_potential(fields));
    } catch (const Error& err) {
      bus_.trace().append(bus_.now(), simnet::EventKind::Warning, im.id + " could not absorb: " + err.what());
      return;
    }
    im.heard.insert(from);
    if (parent_[im.subnet] && from == *parent_[im.subnet]) {
      for (SubnetId c : children_[im.subnet]) send_link(im, c);
    } else {
      send_up_or_down(im);
    }
  }

  void compare(ImAgent& im, const WireMessage& mirror) {
    const auto fields = payload_fields(mirror.payload);
    const auto link = fields.at("link");
    const auto to = static_cast<SubnetId>(text::parse_uint(link.substr(link.find('>') + 1), "subnet"));
    const auto theirs = decode_potential(fields);
    const auto& mine = im.computed.at(to);
    double gap = 0;
    for (std::size_t i = 0; i < mine.size(); ++i) gap = std::max(gap, std::abs(mine.values()[i] - theirs.values()[i]));
    if (gap <= kMirrorTolerance) return;
    const auto& peer = ims_.at(im.peer);
    ++report_.suspicions;
    suspicion_pending_ = true;
    bus_.trace().append(bus_.now(), simnet::EventKind::Note,
                        im.id + " suspects host " + std::to_string(peer.host) + " (gap " + text::format_double(gap) + ")");
    const auto proof = "suspect=" + std::to_string(peer.host) + ' ' + mirror.payload;
    for (HostId h = 0; h < 2 * k_; ++h) {
      if (bus_.is_isolated(h)) continue;
      bus_.schedule(im.host, h, {MessageType::Trust, im.id, "dtm" + std::to_string(h), bus_.now(), proof});
    }
  }

  void on_trust(const simnet::Envelope<WireMessage>& env) {
    const auto fields = payload_fields(env.payload.payload);
    const auto suspect = static_cast<HostId>(text::parse_uint(fields.at("suspect"), "host"));
    const auto& link = fields.at("link");
    const auto gt = link.find('>');
    const auto from = static_cast<SubnetId>(text::parse_uint(link.substr(0, gt), "subnet"));
    const auto to = static_cast<SubnetId>(text::parse_uint(link.substr(gt + 1), "subnet"));
    const auto encoded = encode_potential(decode_potential(fields));
    const auto content = link_content(text::parse_uint(fields.at("epoch"), "epoch"), from, to, encoded);
    if (text::hex64(seal(keys_, suspect, content)) != fields.at("seal")) {
      bus_.trace().append(bus_.now(), simnet::EventKind::Warning,
                          "dtm" + std::to_string(env.recipient) + " rejected an unverifiable proof");
      return;
    }
    assessments_.set(env.recipient, suspect, 1);
  }

  void finish_epoch(std::size_t e, Tick t) {
    EpochReport r;
    r.epoch = e;
    r.record = records_.ids[e];
    r.tick = t;
    for (SubnetId s = 0; s < k_; ++s) {
      const auto* a = active(s);
      if (a == nullptr) {
        r.active.emplace_back("-");
        r.class_posterior.emplace_back();
        continue;
      }
      r.active.push_back(a->id);
      r.class_posterior.push_back(a->ljf.local_posterior(s, detect::kClassVar).probabilities);
    }
    if (const auto* a = active(0)) {
      const auto& classes = msbn_.net().variable(detect::kClassVar).states;
      const auto d = detect::decide(r.class_posterior[0], detect::normal_index(classes), config_.policy.tau);
      if (auto alert = make_alert(d, r.class_posterior[0], classes, a->id, t)) {
        alert->id = report_.alerts.size() + 1;
        alert->record = r.record;
        alert->row.assign(records_.row(e), records_.row(e) + records_.width());
        auto line = format_alert_log(std::span<const Alert>(&*alert, 1));
        if (!line.empty() && line.back() == '\n') line.pop_back();
        bus_.trace().append(t, simnet::EventKind::Note, std::move(line));
        report_.alerts.push_back(std::move(*alert));
      }
    }
    report_.epochs.push_back(std::move(r));

    if (!suspicion_pending_ && (e + 1) % config_.dtm_every != 0) return;
    suspicion_pending_ = false;
    std::vector<trust::Behavior> behaviors(2 * k_, trust::Behavior::honest());
    for (HostId h = 0; h < 2 * k_; ++h) {
      if (const auto c = bus_.compromise(h)) behaviors[h] = c->protocol;
    }
    trust::DtmOptions opt;
    opt.literal_case_one = config_.literal_case_one;
    opt.key_seed = config_.key_seed;
    opt.record_trace = true;
    const auto result = trust::dtm_round(domain_, behaviors, assessments_, opt);
    simnet::log_dtm_round(bus_.trace(), t, result);
    for (HostId h : result.newly_isolated) {
      bus_.isolate(h);
      for (const auto& id : registry_.remove_host(h)) {
        bus_.trace().append(t, simnet::EventKind::Note, "registry dropped " + id);
      }
      report_.isolations.push_back({t, h});
    }
  }

  const msbn::Msbn& msbn_;
  const detect::DiscreteDataset& records_;
  RuntimeConfig config_;
  std::size_t k_;
  trust::KeyRing keys_;
  Bus bus_;
  Registry registry_;
  Subscriptions subs_;
  trust::TrustDomain domain_;
  trust::Assessments assessments_;
  std::vector<std::optional<SubnetId>> parent_;
  std::vector<std::vector<SubnetId>> children_;
  std::size_t depth_ = 0;
  Tick epoch_ticks_ = 10;
  std::vector<SmAgent> sms_;
  std::map<AgentId, ImAgent> ims_;
  bool suspicion_pending_ = false;
  RuntimeReport report_;
};

}  // namespace

RuntimeReport run_distributed(const msbn::Msbn& msbn, const detect::DiscreteDataset& records,
                              const RuntimeConfig& config) {
  if (config.dtm_every == 0) throw Error(ErrorCode::InvalidArgument, "dtm_every must be positive");
  return Runtime(msbn, records, config).run();
}

std::string format_epochs(const RuntimeReport& report) {
  std::string out = "epoch\trecord\tsubnet\tagent\tposterior\n";
  for (const auto& e : report.epochs) {
    for (std::size_t s = 0; s < e.active.size(); ++s) {
      out += std::to_string(e.epoch) + '\t' + std::to_string(e.record) + '\t' + std::to_string(s) + '\t' + e.active[s] +
             '\t';
      for (std::size_t i = 0; i < e.class_posterior[s].size(); ++i) {
        out += (i ? "," : "") + text::format_double(e.class_posterior[s][i]);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace mids::agents
