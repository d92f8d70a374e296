#pragma once

// Random fixtures for property tests. Plain mt19937_64 with hand-rolled
// draws so fixtures are identical on every platform.

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "protoselect/dataset.hpp"

namespace fixtures {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  // Uniform integer in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  bool coin() { return (engine_() & 1u) != 0; }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

struct Spec {
  std::size_t min_size = 1;
  std::size_t max_size = 40;
  std::size_t max_dim = 5;
  std::size_t max_classes = 3;
  // Continuous coordinates make distance ties a measure-zero event.
  bool general_position = true;
};

inline protoselect::Dataset random_dataset(Rng& rng, const Spec& spec) {
  const std::size_t n = rng.between(spec.min_size, spec.max_size);
  const std::size_t dim = rng.between(1, spec.max_dim);
  const std::size_t classes = rng.between(1, spec.max_classes);
  std::vector<std::string> names;
  for (std::size_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));
  protoselect::Dataset ds("fixture", dim, names);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& x : v) {
      x = spec.general_position ? rng.uniform(-5.0, 5.0)
                                : static_cast<double>(rng.between(0, 4));
    }
    const auto label = static_cast<protoselect::Label>(rng.between(0, classes - 1));
    ds.add(v, label, static_cast<protoselect::InstanceId>(i));
  }
  return ds;
}

// Random dataset with at least two occurring classes and more than `min` rows.
inline protoselect::Dataset random_two_class(Rng& rng, std::size_t min, std::size_t max,
                                             std::size_t max_dim = 5) {
  Spec spec;
  spec.min_size = min;
  spec.max_size = max;
  spec.max_dim = max_dim;
  spec.max_classes = 3;
  while (true) {
    auto ds = random_dataset(rng, spec);
    if (ds.class_count() >= 2) return ds;
  }
}

// Same instances in a shuffled row order (ids travel with the rows).
inline protoselect::Dataset shuffled(const protoselect::Dataset& ds, Rng& rng) {
  std::vector<std::size_t> rows(ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng.between(0, i - 1)]);
  return ds.subset(rows);
}

}  // namespace fixtures
