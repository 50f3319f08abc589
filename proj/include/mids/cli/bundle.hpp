#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mids/bayes/network.hpp"
#include "mids/detect/dataset.hpp"
#include "mids/msbn/msbn.hpp"

namespace mids::cli {

// A trained model on disk:
//   network.txt     the network
//   binning.txt     the discretization fitted on the training split
//   sectioning.txt  subnets and links
//   train.tsv       discretized training rows (for knowledgebase updates)
//   test.txt        KDD record indices of the held-out split
//   manifest.txt    config hash and an FNV-1a hash per file
struct Bundle {
  bayes::BayesNet net;
  detect::BinningSpec binning;
  msbn::Msbn msbn;
  detect::DiscreteDataset training;
  std::vector<std::size_t> test;
  std::string config_hash;
};

void write_bundle(const std::filesystem::path& dir, const Bundle& b);
// Throws Io (missing directory or file), BundleMismatch (a file whose hash
// differs from the manifest, or a config hash other than `expected_config`
// when one is given).
Bundle read_bundle(const std::filesystem::path& dir, const std::optional<std::string>& expected_config = std::nullopt);

// train.tsv: "classes <name> ..." then "<id> TAB <label> TAB <cells space-separated>".
std::string serialize_rows(const detect::DiscreteDataset& d);
// Columns come from `binning` (its non-degenerate attributes).
detect::DiscreteDataset parse_rows(std::string_view text, const detect::BinningSpec& binning);

}  // namespace mids::cli
