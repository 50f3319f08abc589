#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mids/agents/registry.hpp"
#include "mids/detect/classify.hpp"

namespace mids::agents {

enum class AlertKind : std::uint8_t { KnownAttack, Anomaly };
enum class AlertStatus : std::uint8_t { Open, ConfirmedAttack, Rejected };
std::string_view to_string(AlertKind k);
std::string_view to_string(AlertStatus s);

struct Alert {
  std::uint64_t id = 0;
  AlertKind kind = AlertKind::Anomaly;
  std::string class_name;  // KnownAttack only
  std::vector<double> posterior;
  AgentId agent;
  std::uint64_t timestamp = 0;
  AlertStatus status = AlertStatus::Open;
  bool kb_update_scheduled = false;
  // What triggered it, so a confirmed anomaly can be learned from.
  std::uint64_t record = 0;
  std::vector<std::uint16_t> row;

  bool operator==(const Alert&) const = default;
};

// Alert for a decision, or nothing for Normal.
std::optional<Alert> make_alert(const detect::Decision& d, std::span<const double> posterior,
                                std::span<const std::string> classes, AgentId agent, std::uint64_t timestamp);

enum class AdminDecision : std::uint8_t { Confirm, Reject };

// Open -> ConfirmedAttack (anomalies also schedule a knowledgebase update)
// or Rejected. Throws AlreadyResolved.
void confirm_alert(Alert& alert, AdminDecision decision);

struct DecisionEntry {
  std::uint64_t alert = 0;
  AdminDecision decision = AdminDecision::Reject;
  std::string label;  // class name for a confirmed anomaly; may be empty
};

// One decision per line: "<alert id> confirm [label]" or "<alert id> reject".
std::vector<DecisionEntry> parse_decisions(std::string_view text);

// Alert log: one ALERT wire line per alert, addressed to "admin".
std::string format_alert_log(std::span<const Alert> alerts);
std::vector<Alert> parse_alert_log(std::string_view text);

struct ReviewOutcome {
  std::size_t confirmed = 0;
  std::size_t rejected = 0;
  // Confirmed anomalies, grouped by label in first-seen order.
  std::vector<std::pair<std::string, std::vector<const Alert*>>> new_classes;
};

// Applies decisions in order. Confirmed anomalies without a label go to
// `default_label`. Throws UnknownAlertId, AlreadyResolved.
ReviewOutcome review_alerts(std::vector<Alert>& alerts, std::span<const DecisionEntry> decisions,
                            const std::string& default_label);

}  // namespace mids::agents
