#include "mids/simnet/network.hpp"

namespace mids::simnet {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Send: return "send";
    case EventKind::Deliver: return "deliver";
    case EventKind::Refuse: return "refuse";
    case EventKind::Isolate: return "isolate";
    case EventKind::Compromise: return "compromise";
    case EventKind::Warning: return "warning";
    case EventKind::Protocol: return "protocol";
    case EventKind::Note: return "note";
  }
  return "?";
}

void TraceLog::append(Tick tick, EventKind kind, std::string detail) {
  events_.push_back({tick, next_seq_++, kind, std::move(detail)});
}

std::size_t TraceLog::count(EventKind kind) const {
  std::size_t n = 0;
  for (const auto& e : events_) n += e.kind == kind ? 1 : 0;
  return n;
}

std::string TraceLog::to_text() const {
  std::string out;
  for (const auto& e : events_) {
    out += std::to_string(e.tick);
    out += '\t';
    out += std::to_string(e.seq);
    out += '\t';
    out += to_string(e.kind);
    out += '\t';
    out += e.detail;
    out += '\n';
  }
  return out;
}

void log_dtm_round(TraceLog& log, Tick tick, const trust::DtmResult& result) {
  for (const auto& inst : result.instances) {
    for (const auto& e : inst.trace) log.append(tick, EventKind::Protocol, "sma " + trust::format_trace_line(inst.leader, e));
    log.append(tick, EventKind::Protocol,
               "verdict host=" + std::to_string(inst.leader) + " choice=" + std::string(trust::to_string(inst.choice)) +
                   " majority=" + std::to_string(inst.majority) + " verdict=" +
                   std::string(trust::to_string(inst.verdict)));
  }
}

}  // namespace mids::simnet
