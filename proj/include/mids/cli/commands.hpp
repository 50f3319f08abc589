#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "mids/cli/bundle.hpp"
#include "mids/cli/config.hpp"
#include "mids/detect/classify.hpp"

namespace mids::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // a check did not hold
inline constexpr int kExitUsage = 2;    // bad flags or input

enum class Format { Table, Records };

// Flags shared by the subcommands; unset ones fall back to the config.
struct Options {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> bundle;
  std::optional<std::filesystem::path> scenario;
  std::optional<std::filesystem::path> decisions;
  std::optional<std::filesystem::path> trace;
  std::optional<std::filesystem::path> alerts;
  std::string evidence;  // infer: name=state,...
  Format format = Format::Table;
};

// Config file plus flag overrides. Throws as load_config.
ExperimentConfig resolve_config(const Options& o);

// The train/evaluate pipeline without any printing.
Bundle train_bundle(const ExperimentConfig& config);
struct Evaluation {
  detect::MetricsReport report;
  std::vector<detect::Prediction> predictions;
  std::vector<std::string> classes;
};
Evaluation evaluate_bundle(const ExperimentConfig& config, const Bundle& bundle);

int cmd_train(const Options& o, std::ostream& out);
int cmd_evaluate(const Options& o, std::ostream& out);
int cmd_section(const Options& o, std::ostream& out);
int cmd_infer(const Options& o, std::ostream& out);
int cmd_trust_sim(const Options& o, std::ostream& out);
int cmd_detect_run(const Options& o, std::ostream& out);
int cmd_review_alerts(const Options& o, std::ostream& out);
// Re-runs whatever produced --trace and compares byte for byte.
int cmd_replay(const Options& o, std::ostream& out);

}  // namespace mids::cli
