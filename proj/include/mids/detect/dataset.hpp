#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mids/detect/kdd.hpp"

namespace mids::detect {

struct Column {
  std::string name;
  std::vector<std::string> states;

  bool operator==(const Column&) const = default;
};

// Row-major table of discrete feature values plus a class label per row.
// `ids` name the source record of each row so train/test hygiene can be
// checked after the fact.
struct DiscreteDataset {
  std::vector<Column> features;
  std::vector<std::string> classes;
  std::vector<std::uint16_t> cells;
  std::vector<std::uint16_t> labels;
  std::vector<std::uint64_t> ids;

  std::size_t rows() const { return labels.size(); }
  std::size_t width() const { return features.size(); }
  std::uint16_t value(std::size_t row, std::size_t feature) const { return cells[row * width() + feature]; }
  const std::uint16_t* row(std::size_t r) const { return cells.data() + r * width(); }
  void add_row(std::span<const std::uint16_t> values, std::uint16_t label, std::uint64_t id);
  // Rows of `other` appended; columns and class lists must match.
  void append(const DiscreteDataset& other);
  DiscreteDataset subset(std::span<const std::size_t> rows) const;
  std::vector<std::size_t> class_counts() const;
};

// Largest-remainder apportionment of `n` over `weights`: floor shares first,
// then one extra unit to the largest remainders (lower index wins ties).
std::vector<std::size_t> apportion(std::span<const std::size_t> weights, std::size_t n);

// Indices (ascending) of a sample of `n` items whose per-stratum counts are
// apportion(stratum sizes, n). Items within a stratum are drawn uniformly
// without replacement. Throws NotEnoughRecords.
std::vector<std::size_t> stratified_sample(std::span<const std::uint32_t> strata, std::size_t n, std::uint64_t seed);

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};
// Per stratum, round(train_fraction * size) items go to train; both lists
// ascending.
Split stratified_split(std::span<const std::uint32_t> strata, double train_fraction, std::uint64_t seed);

struct ContinuousBins {
  // Bin b holds values v with boundaries[b-1] <= v < boundaries[b].
  std::vector<double> boundaries;
};
struct SymbolicBins {
  // Known values in order; anything else (rare or unseen) maps to "other",
  // the last state.
  std::vector<std::string> values;
};

struct AttributeBinning {
  std::string name;
  std::size_t attribute = 0;  // KDD column
  std::variant<ContinuousBins, SymbolicBins> bins;

  std::size_t arity() const;
  // A single-bin attribute carries no information and is left out of the
  // discrete dataset (networks need two states per variable).
  bool degenerate() const { return arity() < 2; }
  std::vector<std::string> state_names() const;
};

struct BinningSpec {
  std::vector<AttributeBinning> attributes;
  std::vector<std::string> classes;
  std::vector<std::string> warnings;  // one per degenerate attribute
};

// Equal-frequency cut points over `values`: candidates at sorted[j*N/k],
// kept when strictly above the minimum and distinct. A non-constant column
// whose candidates all collapse gets one cut at its second-smallest value.
// Returns no cuts for a constant column.
std::vector<double> equal_frequency_cuts(std::vector<double> values, std::size_t k);
std::size_t bin_of(const ContinuousBins& b, double v);

inline constexpr std::size_t kRareSymbolCount = 10;

struct DiscretizeOptions {
  std::size_t bins = 5;
  // KDD attribute names; empty = all 41.
  std::vector<std::string> features;
};

// Fits a BinningSpec on the `rows` of `data` (the training split); `classes`
// names the class labels. Constant attributes are kept as a single bin and
// reported in `warnings`.
BinningSpec fit_binning(const KddData& data, std::span<const std::size_t> rows, std::vector<std::string> classes,
                        const DiscretizeOptions& options);
// Applies `spec` verbatim; out-of-range values clamp to the edge bins. Row
// r gets class row_class[r] and id r. Degenerate attributes are skipped.
DiscreteDataset apply_binning(const BinningSpec& spec, const KddData& data, std::span<const std::size_t> rows,
                              std::span<const std::uint32_t> row_class);

// Text form, one attribute per line:
//   continuous <name> <column> <cut> ...
//   symbolic <name> <column> <value> ...
// preceded by "classes <name> ...". Round-trips byte-identically.
std::string serialize_binning(const BinningSpec& spec);
BinningSpec parse_binning(std::string_view text);

}  // namespace mids::detect
