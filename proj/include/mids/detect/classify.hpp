#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mids/bayes/junction_tree.hpp"
#include "mids/detect/dataset.hpp"
#include "mids/detect/learn.hpp"
#include "mids/msbn/ljf.hpp"

namespace mids::detect {

inline constexpr double kDefaultThreshold = 0.5;
inline constexpr std::string_view kNormalClass = "Normal";

enum class DecisionKind : std::uint8_t { Normal, KnownAttack, Anomaly };
std::string_view to_string(DecisionKind k);

struct Decision {
  DecisionKind kind = DecisionKind::Anomaly;
  std::size_t cls = 0;  // meaningful unless Anomaly

  std::optional<std::size_t> predicted() const {
    return kind == DecisionKind::Anomaly ? std::nullopt : std::optional<std::size_t>(cls);
  }
  bool operator==(const Decision&) const = default;
};

// The alert rule: the most probable class (lowest index on ties) is taken if
// its posterior reaches tau, as Normal or KnownAttack depending on whether it
// is `normal_class`; with no class at tau the record is an Anomaly.
Decision decide(std::span<const double> posterior, std::optional<std::size_t> normal_class, double tau);

// Index of kNormalClass in `classes`, if present.
std::optional<std::size_t> normal_index(std::span<const std::string> classes);

// Evidence for a learned network from one discrete row.
bayes::Evidence row_evidence(const DiscreteDataset& data, std::size_t row);

// Class posterior from one compiled junction tree, reused across records.
class Classifier {
 public:
  explicit Classifier(const bayes::BayesNet& net);
  std::vector<double> posterior(const bayes::Evidence& e);

 private:
  bayes::JunctionTree jt_;
};

// Same query answered by a sectioned forest: each subnet receives the
// evidence on its own variables, then one full communication.
class SectionedClassifier {
 public:
  explicit SectionedClassifier(const msbn::Msbn& msbn);
  std::vector<double> posterior(const bayes::Evidence& e);
  const msbn::LinkedJunctionForest& forest() const { return ljf_; }

 private:
  msbn::LinkedJunctionForest ljf_;
  msbn::SubnetId class_holder_ = 0;
};

// P(class | every feature) for a tree-augmented network by direct product
// of CPT entries; no junction tree involved.
std::vector<double> direct_class_posterior(const bayes::BayesNet& net, const bayes::Evidence& e);

struct Prediction {
  std::uint64_t id = 0;
  std::uint16_t truth = 0;
  std::vector<double> posterior;
  Decision decision;
};

struct ClassMetrics {
  std::string name;
  std::size_t support = 0;          // test records of this class
  std::size_t detected = 0;         // ... predicted as this class
  std::size_t others = 0;           // test records of other classes
  std::size_t false_positives = 0;  // ... predicted as this class
  std::size_t anomalies = 0;        // records of this class raising Anomaly
  double detection_rate = 0;
  double false_positive_rate = 0;   // false_positives / others
  double false_positive_share = 0;  // false_positives / all test records
};

struct MetricsReport {
  std::vector<ClassMetrics> classes;
  std::size_t records = 0;
  std::size_t anomalies = 0;
  double tau = kDefaultThreshold;
};

// Recount from a prediction log. Rates of empty denominators are 0.
MetricsReport metrics_from_predictions(std::span<const std::string> classes, std::span<const Prediction> predictions,
                                       double tau);

template <class Posterior>
std::vector<Prediction> predict_all(const DiscreteDataset& test, double tau, Posterior&& posterior_of) {
  std::vector<Prediction> out;
  out.reserve(test.rows());
  const auto normal = normal_index(test.classes);
  for (std::size_t r = 0; r < test.rows(); ++r) {
    Prediction p;
    p.id = test.ids[r];
    p.truth = test.labels[r];
    p.posterior = posterior_of(row_evidence(test, r));
    p.decision = decide(p.posterior, normal, tau);
    out.push_back(std::move(p));
  }
  return out;
}

// Monolithic classification of every test row. Throws EmptyTestSet.
MetricsReport evaluate(const bayes::BayesNet& net, const DiscreteDataset& test, double tau,
                       std::vector<Prediction>* log = nullptr);

// Aligned table, one row per class, with the quoted reference figures where
// the class name has one.
std::string format_report_table(const MetricsReport& report);
// One `key=value` record per class.
std::string format_report_records(const MetricsReport& report);
// id, true class, decision, posterior vector; tab-separated.
std::string format_prediction_log(std::span<const std::string> classes, std::span<const Prediction> predictions);

struct QuotedFigures {
  double detection = 0;
  double reference_detection = 0;
  double false_positive = 0;
};
// Published percentages for the five activity rows; quoted, never recomputed.
std::optional<QuotedFigures> quoted_figures(std::string_view activity);

}  // namespace mids::detect
