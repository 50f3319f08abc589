#include "mids/detect/synthetic.hpp"

#include "mids/common/error.hpp"
#include "mids/common/rng.hpp"

namespace mids::detect {

std::vector<std::string> SyntheticGenerator::class_names() const {
  std::vector<std::string> out;
  for (const auto& c : classes) out.push_back(c.name);
  return out;
}

namespace {

std::uint16_t draw(Rng& rng, const std::vector<double>& dist) {
  const double u = rng.unit();
  double acc = 0;
  for (std::size_t s = 0; s < dist.size(); ++s) {
    acc += dist[s];
    if (u < acc) return static_cast<std::uint16_t>(s);
  }
  // Rounding left a sliver above the last cumulative sum.
  for (std::size_t s = dist.size(); s-- > 0;) {
    if (dist[s] > 0) return static_cast<std::uint16_t>(s);
  }
  throw Error(ErrorCode::InvalidArgument, "empty distribution");
}

}  // namespace

DiscreteDataset SyntheticGenerator::sample(const std::vector<std::size_t>& counts, std::uint64_t seed,
                                           std::uint64_t first_id) const {
  if (counts.size() != classes.size()) throw Error(ErrorCode::InvalidArgument, "one count per class is required");
  DiscreteDataset out;
  out.features = features;
  out.classes = class_names();
  std::vector<std::uint16_t> row(features.size());
  std::uint64_t id = first_id;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    Rng rng(derive_seed(seed, c));
    for (std::size_t i = 0; i < counts[c]; ++i) {
      for (std::size_t f = 0; f < features.size(); ++f) row[f] = draw(rng, classes[c].distributions[f]);
      out.add_row(row, static_cast<std::uint16_t>(c), id++);
    }
  }
  return out;
}

DiscreteDataset SyntheticGenerator::sample_classes(const std::vector<std::size_t>& which, std::size_t per_class,
                                                   std::uint64_t seed, std::uint64_t first_id) const {
  DiscreteDataset out;
  out.features = features;
  for (auto c : which) out.classes.push_back(classes.at(c).name);
  // The stream depends on the original class index only.
  std::uint64_t id = first_id;
  for (std::size_t i = 0; i < which.size(); ++i) {
    SyntheticGenerator one;
    one.features = features;
    one.classes = {classes.at(which[i])};
    auto part = one.sample({per_class}, derive_seed(seed, which[i]), id);
    id += per_class;
    for (std::size_t r = 0; r < part.rows(); ++r) {
      out.add_row(std::span<const std::uint16_t>(part.row(r), part.width()), static_cast<std::uint16_t>(i), part.ids[r]);
    }
  }
  return out;
}

double SyntheticGenerator::likelihood(std::size_t c, std::span<const std::uint16_t> row) const {
  double p = 1;
  for (std::size_t f = 0; f < features.size(); ++f) p *= classes.at(c).distributions[f][row[f]];
  return p;
}

SyntheticGenerator novelty_generator(std::size_t features) {
  constexpr std::size_t kStates = 8;
  SyntheticGenerator g;
  for (std::size_t f = 0; f < features; ++f) {
    Column col{"f" + std::to_string(f), {}};
    for (std::size_t s = 0; s < kStates; ++s) col.states.push_back("s" + std::to_string(s));
    g.features.push_back(std::move(col));
  }
  const char* names[] = {"Normal", "DoS", "Probe"};
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> dist(kStates, 0.05);
    dist[6] = dist[7] = 0;
    dist[2 * c] = 0.7;
    dist[2 * c + 1] = 0.1;
    g.classes.push_back({names[c], std::vector<std::vector<double>>(features, dist)});
  }
  std::vector<double> novel(kStates, 0.0);
  novel[6] = novel[7] = 0.5;
  g.classes.push_back({"Novel", std::vector<std::vector<double>>(features, novel)});
  return g;
}

}  // namespace mids::detect
