#include "mids/detect/pipeline.hpp"

#include "mids/common/rng.hpp"
#include "mids/detect/learn.hpp"

namespace mids::detect {

Partition partition(const KddData& data, const LabelMap& labels, const PipelineConfig& config) {
  Partition p;
  for (auto c : kAttackClasses) p.classes.emplace_back(to_string(c));
  std::vector<std::uint32_t> label_class(data.labels.size());
  for (std::size_t l = 0; l < data.labels.size(); ++l) {
    label_class[l] = static_cast<std::uint32_t>(labels.map(data.labels[l]));
  }
  p.record_class.reserve(data.records.size());
  for (const auto& r : data.records) p.record_class.push_back(label_class[r.label]);

  p.sample = stratified_sample(p.record_class, config.sample_size, derive_seed(config.seed, 1));
  std::vector<std::uint32_t> sample_class;
  for (auto i : p.sample) sample_class.push_back(p.record_class[i]);
  const auto split = stratified_split(sample_class, config.train_fraction, derive_seed(config.seed, 2));
  for (auto i : split.train) p.train.push_back(p.sample[i]);
  for (auto i : split.test) p.test.push_back(p.sample[i]);
  return p;
}

TrainedModel train_model(const KddData& data, const Partition& part, const PipelineConfig& config) {
  TrainedModel m;
  m.binning = fit_binning(data, part.train, part.classes, config.discretize);
  const auto train = apply_binning(m.binning, data, part.train, part.record_class);
  m.net = fit_cpts(learn_structure(train), train, config.alpha);
  return m;
}

DiscreteDataset discretize_rows(const TrainedModel& model, const KddData& data, const Partition& part,
                                std::span<const std::size_t> rows) {
  return apply_binning(model.binning, data, rows, part.record_class);
}

}  // namespace mids::detect
