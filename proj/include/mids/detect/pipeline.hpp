#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mids/bayes/network.hpp"
#include "mids/detect/dataset.hpp"
#include "mids/detect/kdd.hpp"

namespace mids::detect {

struct PipelineConfig {
  std::uint64_t seed = 42;
  std::size_t sample_size = 15000;
  double train_fraction = 0.7;
  DiscretizeOptions discretize;
  double alpha = 1.0;
};

// Records drawn for an experiment, as indices into the parsed data.
struct Partition {
  std::vector<std::string> classes;       // the five categories in kAttackClasses order
  std::vector<std::uint32_t> record_class;  // per parsed record
  std::vector<std::size_t> sample;
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Maps every label, draws the stratified sample and splits it per class.
// Throws UnknownLabel, NotEnoughRecords.
Partition partition(const KddData& data, const LabelMap& labels, const PipelineConfig& config);

struct TrainedModel {
  bayes::BayesNet net;
  BinningSpec binning;
};

// Bins, structure and CPTs all come from the training rows only.
TrainedModel train_model(const KddData& data, const Partition& part, const PipelineConfig& config);
DiscreteDataset discretize_rows(const TrainedModel& model, const KddData& data, const Partition& part,
                                std::span<const std::size_t> rows);

}  // namespace mids::detect
