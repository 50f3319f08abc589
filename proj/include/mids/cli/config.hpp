#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mids/agents/publish.hpp"
#include "mids/detect/pipeline.hpp"

namespace mids::cli {

// Experiment settings read from a `key = value` file ('#' comments).
// Relative paths are taken from the config file's directory.
//
//   dataset         KDD file, plain or gzip
//   labels          label map (default: kdd_labels.txt beside the config)
//   seed            required; there is no clock-based default
//   sample_size     15000
//   split           training fraction, 0.7
//   bins            equal-frequency bins per continuous attribute, 5
//   alpha           CPT smoothing, 1
//   features        comma-separated attribute names (default all 41)
//   tau             alert threshold, 0.5
//   subnets         automatic sectioning into this many subnets, 3
//   sectioning      sectioning file instead of `subnets`
//   local_period    publish period inside a subdomain, 1
//   remote_period   publish period across subdomains, 10
//   scenario        trust scenario file
//   kb_min_records  confirmed records needed to learn a new class, 10
//   detect_records  test records streamed by detect-run, 200
//   compromise_host detect-run: host to compromise (default none)
//   compromise_tick detect-run: when, 50
struct ExperimentConfig {
  std::filesystem::path source;
  std::optional<std::filesystem::path> dataset;
  std::optional<std::filesystem::path> labels;
  std::optional<std::filesystem::path> sectioning;
  std::optional<std::filesystem::path> scenario;
  std::optional<std::uint64_t> seed;
  std::size_t sample_size = 15000;
  double split = 0.7;
  std::size_t bins = 5;
  double alpha = 1.0;
  std::vector<std::string> features;
  double tau = 0.5;
  std::size_t subnets = 3;
  agents::Tick local_period = 1;
  agents::Tick remote_period = 10;
  std::size_t kb_min_records = 10;
  std::size_t detect_records = 200;
  std::optional<simnet::HostId> compromise_host;
  agents::Tick compromise_tick = 50;

  // Throws InvalidArgument when seed is missing.
  std::uint64_t require_seed() const;
  // Throws InvalidArgument when dataset is missing; Io when it does not exist.
  const std::filesystem::path& require_dataset() const;
  std::filesystem::path labels_path() const;
  detect::PipelineConfig pipeline() const;
  agents::DetectionPolicy policy() const;
  // Everything that shapes a trained bundle, one `key = value` per line.
  std::string model_identity() const;
  std::string hash() const;
};

// Throws ParseError (unknown key, bad value), Io (a referenced file is
// missing; the message names it). Keys in `overridden` are skipped, so a
// flag can replace a path that does not exist here.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                              const std::vector<std::string>& overridden = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overridden = {});

}  // namespace mids::cli
