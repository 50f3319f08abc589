#include "mids/agents/alerts.hpp"

#include <algorithm>

#include "mids/agents/wire.hpp"
#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::agents {

std::string_view to_string(AlertKind k) { return k == AlertKind::KnownAttack ? "KnownAttack" : "Anomaly"; }

std::string_view to_string(AlertStatus s) {
  switch (s) {
    case AlertStatus::Open: return "Open";
    case AlertStatus::ConfirmedAttack: return "ConfirmedAttack";
    case AlertStatus::Rejected: return "Rejected";
  }
  return "?";
}

std::optional<Alert> make_alert(const detect::Decision& d, std::span<const double> posterior,
                                std::span<const std::string> classes, AgentId agent, std::uint64_t timestamp) {
  if (d.kind == detect::DecisionKind::Normal) return std::nullopt;
  Alert a;
  a.kind = d.kind == detect::DecisionKind::KnownAttack ? AlertKind::KnownAttack : AlertKind::Anomaly;
  if (a.kind == AlertKind::KnownAttack) a.class_name = classes[d.cls];
  a.posterior.assign(posterior.begin(), posterior.end());
  a.agent = std::move(agent);
  a.timestamp = timestamp;
  return a;
}

void confirm_alert(Alert& alert, AdminDecision decision) {
  if (alert.status != AlertStatus::Open) {
    throw Error(ErrorCode::AlreadyResolved,
                "alert " + std::to_string(alert.id) + " is already " + std::string(to_string(alert.status)));
  }
  if (decision == AdminDecision::Reject) {
    alert.status = AlertStatus::Rejected;
    return;
  }
  alert.status = AlertStatus::ConfirmedAttack;
  alert.kb_update_scheduled = alert.kind == AlertKind::Anomaly;
}

std::vector<DecisionEntry> parse_decisions(std::string_view contents) {
  std::vector<DecisionEntry> out;
  std::size_t line_no = 0;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = text::trim(line);
    if (line.empty()) continue;
    const auto f = text::split_ws(line);
    const std::string where = "decisions line " + std::to_string(line_no);
    if (f.size() < 2 || f.size() > 3) throw Error(ErrorCode::ParseError, where + ": expected '<id> confirm|reject'");
    DecisionEntry d;
    d.alert = text::parse_uint(f[0], "alert id");
    if (f[1] == "confirm") {
      d.decision = AdminDecision::Confirm;
    } else if (f[1] == "reject" && f.size() == 2) {
      d.decision = AdminDecision::Reject;
    } else {
      throw Error(ErrorCode::ParseError, where + ": cannot read '" + std::string(line) + "'");
    }
    if (f.size() == 3) d.label = std::string(f[2]);
    out.push_back(std::move(d));
  }
  return out;
}

namespace {

std::string join(std::span<const double> v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + text::format_double(v[i]);
  return out;
}

}  // namespace

std::string format_alert_log(std::span<const Alert> alerts) {
  std::string out;
  for (const auto& a : alerts) {
    std::string row;
    for (std::size_t i = 0; i < a.row.size(); ++i) row += (i ? "," : "") + std::to_string(a.row[i]);
    std::string payload = "id=" + std::to_string(a.id) + " kind=" + std::string(to_string(a.kind)) +
                          " class=" + (a.class_name.empty() ? "-" : a.class_name) +
                          " status=" + std::string(to_string(a.status)) +
                          " kb=" + (a.kb_update_scheduled ? "1" : "0") + " record=" + std::to_string(a.record) +
                          " row=" + row + " p=" + join(a.posterior);
    out += format_wire({MessageType::Alert, a.agent, "admin", a.timestamp, payload}) + '\n';
  }
  return out;
}

std::vector<Alert> parse_alert_log(std::string_view contents) {
  std::vector<Alert> out;
  for (auto line : text::split(contents, '\n')) {
    if (text::trim(line).empty()) continue;
    const auto m = parse_wire(line);
    if (m.type != MessageType::Alert) throw Error(ErrorCode::MalformedLine, "alert log holds a non-ALERT line");
    const auto f = payload_fields(m.payload);
    const auto get = [&](const char* k) -> const std::string& {
      const auto it = f.find(k);
      if (it == f.end()) throw Error(ErrorCode::MalformedLine, std::string("alert lacks '") + k + "'");
      return it->second;
    };
    Alert a;
    a.id = text::parse_uint(get("id"), "alert id");
    const auto& kind = get("kind");
    if (kind == "KnownAttack") {
      a.kind = AlertKind::KnownAttack;
    } else if (kind == "Anomaly") {
      a.kind = AlertKind::Anomaly;
    } else {
      throw Error(ErrorCode::MalformedLine, "unknown alert kind '" + kind + "'");
    }
    a.class_name = get("class") == "-" ? "" : get("class");
    const auto& status = get("status");
    if (status == "Open") {
      a.status = AlertStatus::Open;
    } else if (status == "ConfirmedAttack") {
      a.status = AlertStatus::ConfirmedAttack;
    } else if (status == "Rejected") {
      a.status = AlertStatus::Rejected;
    } else {
      throw Error(ErrorCode::MalformedLine, "unknown alert status '" + status + "'");
    }
    a.kb_update_scheduled = get("kb") == "1";
    a.record = text::parse_uint(get("record"), "record");
    if (!get("row").empty()) {
      for (auto v : text::split(get("row"), ',')) a.row.push_back(static_cast<std::uint16_t>(text::parse_uint(v, "row value")));
    }
    if (!get("p").empty()) {
      for (auto v : text::split(get("p"), ',')) a.posterior.push_back(text::parse_double(v, "posterior"));
    }
    a.agent = m.sender;
    a.timestamp = m.timestamp;
    out.push_back(std::move(a));
  }
  return out;
}

ReviewOutcome review_alerts(std::vector<Alert>& alerts, std::span<const DecisionEntry> decisions,
                            const std::string& default_label) {
  ReviewOutcome out;
  for (const auto& d : decisions) {
    const auto it = std::find_if(alerts.begin(), alerts.end(), [&](const Alert& a) { return a.id == d.alert; });
    if (it == alerts.end()) throw Error(ErrorCode::UnknownAlertId, "no alert with id " + std::to_string(d.alert));
    confirm_alert(*it, d.decision);
    if (d.decision == AdminDecision::Reject) {
      ++out.rejected;
      continue;
    }
    ++out.confirmed;
    if (!it->kb_update_scheduled) continue;
    const auto label = d.label.empty() ? default_label : d.label;
    auto group = std::find_if(out.new_classes.begin(), out.new_classes.end(),
                              [&](const auto& g) { return g.first == label; });
    if (group == out.new_classes.end()) {
      out.new_classes.emplace_back(label, std::vector<const Alert*>{});
      group = out.new_classes.end() - 1;
    }
    group->second.push_back(&*it);
  }
  return out;
}

}  // namespace mids::agents
