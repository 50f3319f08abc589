#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mids/detect/dataset.hpp"

namespace mids::detect {

// Class-conditional independent features: class c draws feature f from
// classes[c].distributions[f].
struct SyntheticGenerator {
  struct Class {
    std::string name;
    std::vector<std::vector<double>> distributions;
  };
  std::vector<Column> features;
  std::vector<Class> classes;

  std::vector<std::string> class_names() const;
  // counts[c] rows of class c, in class order. Ids run from first_id.
  DiscreteDataset sample(const std::vector<std::size_t>& counts, std::uint64_t seed, std::uint64_t first_id = 0) const;
  // per_class rows of each listed class, which become the class list. A
  // class draws the same rows whichever subset it is sampled with.
  DiscreteDataset sample_classes(const std::vector<std::size_t>& which, std::size_t per_class, std::uint64_t seed,
                                 std::uint64_t first_id = 0) const;
  // Likelihood of a row under class c.
  double likelihood(std::size_t c, std::span<const std::uint16_t> row) const;
};

// Classes Normal, DoS, Probe over `features` features with 8 states. Class c
// puts 0.7 on state 2c and 0.1 on state 2c+1, spreading 0.2 over the other
// states 0..5; states 6 and 7 are never produced. A fourth class Novel puts
// all of its mass on states 6 and 7 (0.5 each), so its rows have zero
// likelihood under the first three.
SyntheticGenerator novelty_generator(std::size_t features = 6);

}  // namespace mids::detect
