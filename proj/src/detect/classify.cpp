#include "mids/detect/classify.hpp"

#include <algorithm>
#include <cstdio>

#include "mids/common/error.hpp"
#include "mids/common/text.hpp"

namespace mids::detect {

std::string_view to_string(DecisionKind k) {
  switch (k) {
    case DecisionKind::Normal: return "Normal";
    case DecisionKind::KnownAttack: return "KnownAttack";
    case DecisionKind::Anomaly: return "Anomaly";
  }
  return "?";
}

Decision decide(std::span<const double> posterior, std::optional<std::size_t> normal_class, double tau) {
  if (posterior.empty()) throw Error(ErrorCode::InvalidArgument, "empty posterior");
  const auto best = static_cast<std::size_t>(std::max_element(posterior.begin(), posterior.end()) - posterior.begin());
  if (posterior[best] < tau) return {DecisionKind::Anomaly, 0};
  return {normal_class && *normal_class == best ? DecisionKind::Normal : DecisionKind::KnownAttack, best};
}

std::optional<std::size_t> normal_index(std::span<const std::string> classes) {
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (classes[i] == kNormalClass) return i;
  }
  return std::nullopt;
}

bayes::Evidence row_evidence(const DiscreteDataset& data, std::size_t row) {
  bayes::Evidence e;
  for (std::size_t f = 0; f < data.width(); ++f) e.set(feature_var(f), data.value(row, f));
  return e;
}

Classifier::Classifier(const bayes::BayesNet& net) : jt_(bayes::compile(net)) {}

std::vector<double> Classifier::posterior(const bayes::Evidence& e) {
  jt_.reset();
  jt_.propagate(e);
  return bayes::query_posterior(jt_, kClassVar).probabilities;
}

SectionedClassifier::SectionedClassifier(const msbn::Msbn& msbn) : ljf_(msbn::compile_ljf(msbn)) {
  const auto holders = msbn.holders(kClassVar);
  if (holders.empty()) throw Error(ErrorCode::UnknownVariable, "no subnet holds the class variable");
  class_holder_ = holders.front();
}

std::vector<double> SectionedClassifier::posterior(const bayes::Evidence& e) {
  ljf_.reset();
  const auto& m = ljf_.msbn();
  for (msbn::SubnetId s = 0; s < m.subnet_count(); ++s) {
    msbn::SubnetEvidence local{s, {}};
    for (const auto& [v, state] : e) {
      if (m.contains(s, v)) local.evidence.set(v, state);
    }
    if (!local.evidence.empty()) ljf_.enter_evidence(local);
  }
  ljf_.full_communication();
  return ljf_.local_posterior(class_holder_, kClassVar).probabilities;
}

std::vector<double> direct_class_posterior(const bayes::BayesNet& net, const bayes::Evidence& e) {
  const std::size_t k = net.arity(kClassVar);
  std::vector<double> out(k);
  for (std::size_t c = 0; c < k; ++c) {
    bayes::Evidence full = e;
    full.set(kClassVar, c);
    out[c] = bayes::joint_probability(net, full);
  }
  double total = 0;
  for (double p : out) total += p;
  if (!(total > 0)) throw Error(ErrorCode::ZeroProbabilityEvidence, "record has zero probability under every class");
  for (double& p : out) p /= total;
  return out;
}

MetricsReport metrics_from_predictions(std::span<const std::string> classes, std::span<const Prediction> predictions,
                                       double tau) {
  MetricsReport r;
  r.tau = tau;
  r.records = predictions.size();
  r.classes.resize(classes.size());
  for (std::size_t c = 0; c < classes.size(); ++c) r.classes[c].name = classes[c];
  for (const auto& p : predictions) {
    const auto predicted = p.decision.predicted();
    if (!predicted) {
      ++r.anomalies;
      ++r.classes[p.truth].anomalies;
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
      auto& m = r.classes[c];
      const bool hit = predicted && *predicted == c;
      if (p.truth == c) {
        ++m.support;
        m.detected += hit ? 1 : 0;
      } else {
        ++m.others;
        m.false_positives += hit ? 1 : 0;
      }
    }
  }
  for (auto& m : r.classes) {
    m.detection_rate = m.support ? static_cast<double>(m.detected) / static_cast<double>(m.support) : 0.0;
    m.false_positive_rate = m.others ? static_cast<double>(m.false_positives) / static_cast<double>(m.others) : 0.0;
    m.false_positive_share =
        r.records ? static_cast<double>(m.false_positives) / static_cast<double>(r.records) : 0.0;
  }
  return r;
}

MetricsReport evaluate(const bayes::BayesNet& net, const DiscreteDataset& test, double tau,
                       std::vector<Prediction>* log) {
  if (test.rows() == 0) throw Error(ErrorCode::EmptyTestSet, "no test records");
  Classifier clf(net);
  auto preds = predict_all(test, tau, [&](const bayes::Evidence& e) { return clf.posterior(e); });
  auto report = metrics_from_predictions(test.classes, preds, tau);
  if (log) *log = std::move(preds);
  return report;
}

std::optional<QuotedFigures> quoted_figures(std::string_view activity) {
  if (activity == "DoS") return QuotedFigures{98.25, 97.57, 10.25};
  if (activity == "R2L") return QuotedFigures{7.31, 0.37, 12.43};
  if (activity == "U2R") return QuotedFigures{86.42, 71.49, 10.57};
  if (activity == "Probe") return QuotedFigures{94.28, 90.49, 11.87};
  if (activity == "Normal") return QuotedFigures{97.80, 98.13, 7.31};
  return std::nullopt;
}

namespace {

std::string pct(double rate) { return text::format_fixed(100.0 * rate, 2); }

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_report_table(const MetricsReport& report) {
  std::string out;
  out += "# structure learner: tree-augmented (method-substituted)\n";
  out += "# false positive: share of records of other classes predicted as this class\n";
  out += "# quoted columns are published figures, not recomputed here\n";
  out += "# records " + std::to_string(report.records) + "  anomalies " + std::to_string(report.anomalies) +
         "  tau " + text::format_double(report.tau) + '\n';
  const std::vector<std::string> head = {"Activity",     "Detection%", "quoted",  "quoted-ref", "FP%",
                                         "quoted-FP",    "support",    "detected", "others",     "false-pos",
                                         "anomalies"};
  const std::vector<std::size_t> w = {10, 11, 8, 11, 7, 10, 8, 9, 8, 10, 9};
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += i + 1 < cells.size() ? pad(cells[i], w[i]) : cells[i];
    out += '\n';
  };
  emit(head);
  for (const auto& m : report.classes) {
    const auto q = quoted_figures(m.name);
    emit({m.name, pct(m.detection_rate), q ? text::format_fixed(q->detection, 2) : "-",
          q ? text::format_fixed(q->reference_detection, 2) : "-", pct(m.false_positive_rate),
          q ? text::format_fixed(q->false_positive, 2) : "-", std::to_string(m.support), std::to_string(m.detected),
          std::to_string(m.others), std::to_string(m.false_positives), std::to_string(m.anomalies)});
  }
  return out;
}

std::string format_report_records(const MetricsReport& report) {
  std::string out;
  for (const auto& m : report.classes) {
    out += "class=" + m.name + " detection_rate=" + text::format_double(m.detection_rate) +
           " false_positive_rate=" + text::format_double(m.false_positive_rate) +
           " false_positive_share=" + text::format_double(m.false_positive_share) +
           " support=" + std::to_string(m.support) + " detected=" + std::to_string(m.detected) +
           " others=" + std::to_string(m.others) + " false_positives=" + std::to_string(m.false_positives) +
           " anomalies=" + std::to_string(m.anomalies);
    if (const auto q = quoted_figures(m.name)) {
      out += " quoted_detection=" + text::format_fixed(q->detection, 2) +
             " quoted_reference_detection=" + text::format_fixed(q->reference_detection, 2) +
             " quoted_false_positive=" + text::format_fixed(q->false_positive, 2);
    }
    out += '\n';
  }
  out += "summary records=" + std::to_string(report.records) + " anomalies=" + std::to_string(report.anomalies) +
         " tau=" + text::format_double(report.tau) + '\n';
  return out;
}

std::string format_prediction_log(std::span<const std::string> classes, std::span<const Prediction> predictions) {
  std::string out = "id\ttruth\tdecision\tclass";
  for (const auto& c : classes) out += "\tP(" + c + ")";
  out += '\n';
  for (const auto& p : predictions) {
    out += std::to_string(p.id) + '\t' + classes[p.truth] + '\t' + std::string(to_string(p.decision.kind)) + '\t' +
           (p.decision.predicted() ? classes[p.decision.cls] : std::string("-"));
    for (double v : p.posterior) out += '\t' + text::format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace mids::detect
