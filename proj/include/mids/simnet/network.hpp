#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mids/common/error.hpp"
#include "mids/trust/dtm.hpp"
#include "mids/trust/sma.hpp"

namespace mids::simnet {

using HostId = std::uint32_t;
using Tick = std::uint64_t;

struct SimConfig {
  std::size_t hosts = 0;
  std::uint64_t seed = 1;
  Tick latency = 1;  // between different hosts; same-host delivery is immediate
  Tick tick_limit = 100000;
};

enum class EventKind : std::uint8_t { Send, Deliver, Refuse, Isolate, Compromise, Warning, Protocol, Note };
std::string_view to_string(EventKind k);

struct TraceEvent {
  Tick tick = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Note;
  std::string detail;
};

// Totally ordered by (tick, seq); seq is global and strictly increasing.
class TraceLog {
 public:
  void append(Tick tick, EventKind kind, std::string detail);
  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t count(EventKind kind) const;
  // One line per event: tick seq kind detail (tab-separated).
  std::string to_text() const;

 private:
  std::vector<TraceEvent> events_;
  std::uint64_t next_seq_ = 0;
};

// A host's misbehavior from `at` onwards: protocol behavior for agreement
// instances, plus optional corruption of the beliefs it publishes.
struct Compromise {
  HostId host = 0;
  Tick at = 0;
  trust::Behavior protocol = trust::Behavior::lie(0);
  bool skew_beliefs = true;
};

template <class Payload>
struct Envelope {
  Tick send_tick = 0;
  Tick deliver_tick = 0;
  HostId sender = 0;
  HostId recipient = 0;
  std::uint64_t id = 0;
  Payload payload;
};

inline std::string describe(const std::string& payload) { return payload; }

// Discrete-event message bus. Envelopes due at the same tick are delivered in
// the order they were scheduled.
template <class Payload>
class Network {
 public:
  explicit Network(SimConfig config) : config_(config) {
    if (config_.hosts == 0) throw Error(ErrorCode::InvalidArgument, "network needs at least one host");
    if (config_.latency == 0) throw Error(ErrorCode::InvalidArgument, "inter-host latency must be at least 1");
  }

  const SimConfig& config() const { return config_; }
  Tick now() const { return now_; }
  const TraceLog& trace() const { return trace_; }
  TraceLog& trace() { return trace_; }
  std::size_t pending() const { return queue_.size(); }
  std::size_t delivered() const { return delivered_; }
  std::size_t refused() const { return refused_; }
  std::size_t sent_between(HostId from, HostId to) const {
    const auto it = link_counts_.find({from, to});
    return it == link_counts_.end() ? 0 : it->second;
  }

  // Throws UnknownHost, SenderIsolated.
  std::uint64_t schedule(HostId from, HostId to, Payload payload) {
    check_host(from);
    check_host(to);
    if (isolated_.count(from)) {
      throw Error(ErrorCode::SenderIsolated, "host " + std::to_string(from) + " is isolated");
    }
    const Tick latency = from == to ? 0 : config_.latency;
    Envelope<Payload> env{now_, now_ + latency, from, to, next_id_++, std::move(payload)};
    trace_.append(now_, EventKind::Send, line(env));
    ++link_counts_[{from, to}];
    if (latency == 0) {
      deliver_now_.push_back(std::move(env));
    } else {
      queue_.push(std::move(env));
    }
    return next_id_ - 1;
  }

  void isolate(HostId h) {
    check_host(h);
    if (isolated_.insert(h).second) trace_.append(now_, EventKind::Isolate, "host=" + std::to_string(h));
  }
  bool is_isolated(HostId h) const { return isolated_.count(h) != 0; }
  const std::set<HostId>& isolated() const { return isolated_; }

  void inject_compromise(const Compromise& c) {
    check_host(c.host);
    if (c.at > config_.tick_limit) {
      trace_.append(now_, EventKind::Warning,
                    "compromise of host " + std::to_string(c.host) + " at tick " + std::to_string(c.at) +
                        " is past the tick limit; ignored");
      return;
    }
    compromises_[c.host] = c;
  }
  // The compromise in force for `h` at the current tick, if any.
  std::optional<Compromise> compromise(HostId h) const {
    const auto it = compromises_.find(h);
    if (it == compromises_.end() || it->second.at > now_) return std::nullopt;
    return it->second;
  }

  // Advances tick by tick up to `until`. At each tick, due envelopes are
  // handed to on_deliver(envelope) (refused if an endpoint is isolated), then
  // on_tick(tick) runs. Same-host envelopes scheduled during either step are
  // delivered within the same tick. Throws TickLimitExceeded.
  template <class OnDeliver, class OnTick>
  void run_until(Tick until, OnDeliver&& on_deliver, OnTick&& on_tick) {
    if (until > config_.tick_limit) {
      throw Error(ErrorCode::TickLimitExceeded,
                  "tick " + std::to_string(until) + " exceeds limit " + std::to_string(config_.tick_limit));
    }
    drain_local(on_deliver);  // same-host envelopes scheduled between runs are due now
    while (now_ < until) {
      ++now_;
      for (const auto& [host, c] : compromises_) {
        if (c.at == now_) {
          trace_.append(now_, EventKind::Compromise,
                        "host=" + std::to_string(host) + " behavior=" + trust::to_string(c.protocol) +
                            (c.skew_beliefs ? " skew_beliefs" : ""));
        }
      }
      while (!queue_.empty() && queue_.top().deliver_tick <= now_) {
        Envelope<Payload> env = queue_.top();
        queue_.pop();
        hand_over(std::move(env), on_deliver);
        drain_local(on_deliver);
      }
      drain_local(on_deliver);
      on_tick(now_);
      drain_local(on_deliver);
    }
  }

 private:
  struct Later {
    bool operator()(const Envelope<Payload>& a, const Envelope<Payload>& b) const {
      return a.deliver_tick != b.deliver_tick ? a.deliver_tick > b.deliver_tick : a.id > b.id;
    }
  };

  void check_host(HostId h) const {
    if (h >= config_.hosts) throw Error(ErrorCode::UnknownHost, "host " + std::to_string(h) + " does not exist");
  }

  std::string line(const Envelope<Payload>& env) const {
    return "id=" + std::to_string(env.id) + " from=" + std::to_string(env.sender) +
           " to=" + std::to_string(env.recipient) + " due=" + std::to_string(env.deliver_tick) + ' ' +
           describe(env.payload);
  }

  template <class OnDeliver>
  void hand_over(Envelope<Payload> env, OnDeliver& on_deliver) {
    if (isolated_.count(env.sender) || isolated_.count(env.recipient)) {
      ++refused_;
      trace_.append(now_, EventKind::Refuse, "id=" + std::to_string(env.id) + " endpoint isolated");
      return;
    }
    ++delivered_;
    trace_.append(now_, EventKind::Deliver, "id=" + std::to_string(env.id));
    on_deliver(env);
  }

  template <class OnDeliver>
  void drain_local(OnDeliver& on_deliver) {
    while (!deliver_now_.empty()) {
      std::vector<Envelope<Payload>> batch;
      batch.swap(deliver_now_);
      for (auto& env : batch) hand_over(std::move(env), on_deliver);
    }
  }

  SimConfig config_;
  Tick now_ = 0;
  std::uint64_t next_id_ = 0;
  std::priority_queue<Envelope<Payload>, std::vector<Envelope<Payload>>, Later> queue_;
  std::vector<Envelope<Payload>> deliver_now_;
  std::set<HostId> isolated_;
  std::map<HostId, Compromise> compromises_;
  std::map<std::pair<HostId, HostId>, std::size_t> link_counts_;
  TraceLog trace_;
  std::size_t delivered_ = 0;
  std::size_t refused_ = 0;
};

// Records every agreement message of a finished trust round and the
// resulting verdicts as protocol events at `tick`.
void log_dtm_round(TraceLog& log, Tick tick, const trust::DtmResult& result);

}  // namespace mids::simnet
