#include "mids/detect/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mids/common/error.hpp"
#include "mids/common/rng.hpp"
#include "mids/common/text.hpp"

namespace mids::detect {

void DiscreteDataset::add_row(std::span<const std::uint16_t> values, std::uint16_t label, std::uint64_t id) {
  if (values.size() != width()) throw Error(ErrorCode::InvalidArgument, "row width does not match the dataset");
  if (label >= classes.size()) throw Error(ErrorCode::InvalidArgument, "class label out of range");
  for (std::size_t f = 0; f < values.size(); ++f) {
    if (values[f] >= features[f].states.size()) {
      throw Error(ErrorCode::ArityMismatch, "value out of range for '" + features[f].name + "'");
    }
  }
  cells.insert(cells.end(), values.begin(), values.end());
  labels.push_back(label);
  ids.push_back(id);
}

void DiscreteDataset::append(const DiscreteDataset& other) {
  if (other.features != features || other.classes != classes) {
    throw Error(ErrorCode::InvalidArgument, "datasets have different columns or classes");
  }
  cells.insert(cells.end(), other.cells.begin(), other.cells.end());
  labels.insert(labels.end(), other.labels.begin(), other.labels.end());
  ids.insert(ids.end(), other.ids.begin(), other.ids.end());
}

DiscreteDataset DiscreteDataset::subset(std::span<const std::size_t> rows) const {
  DiscreteDataset out;
  out.features = features;
  out.classes = classes;
  out.cells.reserve(rows.size() * width());
  for (auto r : rows) {
    out.cells.insert(out.cells.end(), row(r), row(r) + width());
    out.labels.push_back(labels[r]);
    out.ids.push_back(ids[r]);
  }
  return out;
}

std::vector<std::size_t> DiscreteDataset::class_counts() const {
  std::vector<std::size_t> c(classes.size(), 0);
  for (auto l : labels) ++c[l];
  return c;
}

std::vector<std::size_t> apportion(std::span<const std::size_t> weights, std::size_t n) {
  const std::size_t total = std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::vector<std::size_t> out(weights.size(), 0);
  if (total == 0) return out;
  // Exact integer arithmetic: share_i = n*w_i/total, remainder n*w_i % total.
  std::vector<std::pair<unsigned __int128, std::size_t>> rem;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const unsigned __int128 p = static_cast<unsigned __int128>(n) * weights[i];
    out[i] = static_cast<std::size_t>(p / total);
    assigned += out[i];
    rem.emplace_back(p % total, i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t j = 0; assigned < n; ++j, ++assigned) ++out[rem[j].second];
  return out;
}

namespace {

std::vector<std::vector<std::size_t>> group(std::span<const std::uint32_t> strata) {
  std::vector<std::vector<std::size_t>> g;
  for (std::size_t i = 0; i < strata.size(); ++i) {
    if (strata[i] >= g.size()) g.resize(strata[i] + 1);
    g[strata[i]].push_back(i);
  }
  return g;
}

}  // namespace

std::vector<std::size_t> stratified_sample(std::span<const std::uint32_t> strata, std::size_t n, std::uint64_t seed) {
  if (n > strata.size()) {
    throw Error(ErrorCode::NotEnoughRecords,
                "asked for " + std::to_string(n) + " records but only " + std::to_string(strata.size()) + " exist");
  }
  auto groups = group(strata);
  std::vector<std::size_t> sizes;
  for (const auto& g : groups) sizes.push_back(g.size());
  const auto counts = apportion(sizes, n);
  std::vector<std::size_t> out;
  out.reserve(n);
  for (std::size_t s = 0; s < groups.size(); ++s) {
    Rng rng(derive_seed(seed, s));
    auto& g = groups[s];
    // Partial Fisher-Yates: the first counts[s] slots become the draw.
    for (std::size_t i = 0; i < counts[s]; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform(g.size() - i));
      std::swap(g[i], g[j]);
    }
    out.insert(out.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(counts[s]));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Split stratified_split(std::span<const std::uint32_t> strata, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw Error(ErrorCode::InvalidArgument, "train fraction must lie in (0, 1)");
  }
  Split out;
  auto groups = group(strata);
  for (std::size_t s = 0; s < groups.size(); ++s) {
    auto& g = groups[s];
    Rng rng(derive_seed(seed ^ 0x5b1175ULL, s));
    rng.shuffle(std::span<std::size_t>(g));
    const auto k = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(g.size())));
    out.train.insert(out.train.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(k));
    out.test.insert(out.test.end(), g.begin() + static_cast<std::ptrdiff_t>(k), g.end());
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::size_t AttributeBinning::arity() const {
  if (const auto* c = std::get_if<ContinuousBins>(&bins)) return c->boundaries.size() + 1;
  return std::get<SymbolicBins>(bins).values.size() + 1;
}

std::vector<std::string> AttributeBinning::state_names() const {
  std::vector<std::string> out;
  if (const auto* c = std::get_if<ContinuousBins>(&bins)) {
    for (std::size_t b = 0; b <= c->boundaries.size(); ++b) out.push_back("b" + std::to_string(b));
    return out;
  }
  // Symbolic values may hold characters the network format cannot, so
  // states are positional; the binning spec keeps the value names.
  const auto& s = std::get<SymbolicBins>(bins);
  for (std::size_t i = 0; i < s.values.size(); ++i) out.push_back("v" + std::to_string(i));
  out.push_back("other");
  return out;
}

std::vector<double> equal_frequency_cuts(std::vector<double> values, std::size_t k) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 bins");
  std::vector<double> cuts;
  if (values.empty()) return cuts;
  std::sort(values.begin(), values.end());
  const double lo = values.front();
  const std::size_t n = values.size();
  for (std::size_t j = 1; j < k; ++j) {
    const double c = values[j * n / k];
    if (c > lo && (cuts.empty() || c > cuts.back())) cuts.push_back(c);
  }
  if (cuts.empty() && values.back() > lo) {
    cuts.push_back(*std::upper_bound(values.begin(), values.end(), lo));
  }
  return cuts;
}

std::size_t bin_of(const ContinuousBins& b, double v) {
  return static_cast<std::size_t>(std::upper_bound(b.boundaries.begin(), b.boundaries.end(), v) - b.boundaries.begin());
}

namespace {

std::vector<std::size_t> selected_attributes(const DiscretizeOptions& options) {
  const auto& schema = kdd_schema();
  std::vector<std::size_t> out;
  if (options.features.empty()) {
    for (std::size_t a = 0; a < kKddAttributes; ++a) out.push_back(a);
    return out;
  }
  for (const auto& name : options.features) {
    std::size_t a = 0;
    while (a < kKddAttributes && schema[a].name != name) ++a;
    if (a == kKddAttributes) throw Error(ErrorCode::UnknownVariable, "no KDD attribute named '" + name + "'");
    out.push_back(a);
  }
  return out;
}

}  // namespace

BinningSpec fit_binning(const KddData& data, std::span<const std::size_t> rows, std::vector<std::string> classes,
                        const DiscretizeOptions& options) {
  if (rows.empty()) throw Error(ErrorCode::EmptyDataset, "no training rows to fit bins on");
  const auto& schema = kdd_schema();
  BinningSpec spec;
  spec.classes = std::move(classes);
  for (auto a : selected_attributes(options)) {
    AttributeBinning ab;
    ab.name = std::string(schema[a].name);
    ab.attribute = a;
    bool constant = true;
    if (schema[a].symbolic) {
      std::vector<std::size_t> counts(data.symbols[a].size(), 0);
      for (auto r : rows) ++counts[static_cast<std::size_t>(data.records[r].values[a])];
      SymbolicBins s;
      std::size_t seen = 0;
      for (std::size_t v = 0; v < counts.size(); ++v) {
        seen += counts[v] > 0 ? 1 : 0;
        if (counts[v] >= kRareSymbolCount) s.values.push_back(data.symbols[a][v]);
      }
      std::sort(s.values.begin(), s.values.end());
      constant = seen <= 1;
      ab.bins = std::move(s);
    } else {
      std::vector<double> values;
      values.reserve(rows.size());
      for (auto r : rows) values.push_back(data.records[r].values[a]);
      ContinuousBins c{equal_frequency_cuts(std::move(values), options.bins)};
      constant = c.boundaries.empty();
      ab.bins = std::move(c);
    }
    if (constant) spec.warnings.push_back("DegenerateAttribute: '" + ab.name + "' is constant on the training split");
    spec.attributes.push_back(std::move(ab));
  }
  return spec;
}

DiscreteDataset apply_binning(const BinningSpec& spec, const KddData& data, std::span<const std::size_t> rows,
                              std::span<const std::uint32_t> row_class) {
  DiscreteDataset out;
  out.classes = spec.classes;
  std::vector<std::size_t> kept;
  for (std::size_t f = 0; f < spec.attributes.size(); ++f) {
    if (spec.attributes[f].degenerate()) continue;
    kept.push_back(f);
    out.features.push_back({spec.attributes[f].name, spec.attributes[f].state_names()});
  }
  // Per symbolic attribute: data symbol index -> state.
  std::vector<std::vector<std::uint16_t>> symbol_state(spec.attributes.size());
  for (std::size_t f = 0; f < spec.attributes.size(); ++f) {
    const auto* s = std::get_if<SymbolicBins>(&spec.attributes[f].bins);
    if (s == nullptr) continue;
    const auto& names = data.symbols[spec.attributes[f].attribute];
    auto& m = symbol_state[f];
    m.assign(names.size(), static_cast<std::uint16_t>(s->values.size()));
    for (std::size_t v = 0; v < names.size(); ++v) {
      const auto it = std::lower_bound(s->values.begin(), s->values.end(), names[v]);
      if (it != s->values.end() && *it == names[v]) m[v] = static_cast<std::uint16_t>(it - s->values.begin());
    }
  }
  std::vector<std::uint16_t> cells(kept.size());
  for (auto r : rows) {
    const auto& rec = data.records[r];
    for (std::size_t i = 0; i < kept.size(); ++i) {
      const auto f = kept[i];
      const auto& ab = spec.attributes[f];
      const double v = rec.values[ab.attribute];
      if (const auto* c = std::get_if<ContinuousBins>(&ab.bins)) {
        cells[i] = static_cast<std::uint16_t>(bin_of(*c, v));
      } else {
        cells[i] = symbol_state[f][static_cast<std::size_t>(v)];
      }
    }
    if (row_class[r] >= spec.classes.size()) throw Error(ErrorCode::InvalidArgument, "class index out of range");
    out.add_row(cells, static_cast<std::uint16_t>(row_class[r]), r);
  }
  return out;
}

std::string serialize_binning(const BinningSpec& spec) {
  std::string out = "classes";
  for (const auto& c : spec.classes) out += ' ' + c;
  out += '\n';
  for (const auto& ab : spec.attributes) {
    if (const auto* c = std::get_if<ContinuousBins>(&ab.bins)) {
      out += "continuous " + ab.name + ' ' + std::to_string(ab.attribute);
      for (double b : c->boundaries) out += ' ' + text::format_double(b);
    } else {
      out += "symbolic " + ab.name + ' ' + std::to_string(ab.attribute);
      for (const auto& v : std::get<SymbolicBins>(ab.bins).values) out += ' ' + v;
    }
    out += '\n';
  }
  return out;
}

BinningSpec parse_binning(std::string_view contents) {
  BinningSpec spec;
  std::size_t line_no = 0;
  bool have_classes = false;
  for (auto line : text::split(contents, '\n')) {
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    const auto f = text::split_ws(line);
    const std::string where = "binning line " + std::to_string(line_no);
    if (f[0] == "classes") {
      for (std::size_t i = 1; i < f.size(); ++i) spec.classes.emplace_back(f[i]);
      have_classes = true;
      continue;
    }
    if (f.size() < 3 || (f[0] != "continuous" && f[0] != "symbolic")) {
      throw Error(ErrorCode::ParseError, where + ": cannot read '" + std::string(line) + "'");
    }
    AttributeBinning ab;
    ab.name = std::string(f[1]);
    ab.attribute = text::parse_uint(f[2], "attribute column");
    if (ab.attribute >= kKddAttributes) throw Error(ErrorCode::ParseError, where + ": attribute column out of range");
    if (f[0] == "continuous") {
      ContinuousBins c;
      for (std::size_t i = 3; i < f.size(); ++i) {
        c.boundaries.push_back(text::parse_double(f[i], "cut point"));
        if (c.boundaries.size() > 1 && !(c.boundaries.back() > c.boundaries[c.boundaries.size() - 2])) {
          throw Error(ErrorCode::ParseError, where + ": cut points must increase");
        }
      }
      ab.bins = std::move(c);
    } else {
      SymbolicBins s;
      for (std::size_t i = 3; i < f.size(); ++i) s.values.emplace_back(f[i]);
      if (!std::is_sorted(s.values.begin(), s.values.end())) {
        throw Error(ErrorCode::ParseError, where + ": symbolic values must be sorted");
      }
      ab.bins = std::move(s);
    }
    spec.attributes.push_back(std::move(ab));
  }
  if (!have_classes) throw Error(ErrorCode::ParseError, "binning has no 'classes' line");
  return spec;
}

}  // namespace mids::detect
