#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "protoselect/dataset.hpp"

namespace protoselect {

/// Uniform grid over the bounding box of a point set: `n` intervals per
/// dimension, interval width ranges[j] = (max_j - min_j) / n.
struct GridSpec {
  std::size_t n = 1;
  std::vector<double> mins;
  std::vector<double> ranges;

  std::size_t dim() const noexcept { return mins.size(); }
  /// Closed bounds of interval `index` on dimension `j`.
  double lower(std::size_t j, std::uint32_t index) const;
  double upper(std::size_t j, std::uint32_t index) const;
};

/// Cell coordinates: one interval index per dimension.
struct PartitionKey {
  std::vector<std::uint32_t> indices;

  friend bool operator==(const PartitionKey&, const PartitionKey&) = default;
  friend auto operator<=>(const PartitionKey&, const PartitionKey&) = default;
};

struct PartitionKeyHash {
  std::size_t operator()(const PartitionKey& key) const noexcept;
};

struct PartitionGroup {
  PartitionKey key;
  /// Row positions (ascending) in the partitioned dataset.
  std::vector<std::size_t> rows;
};

/// Non-empty cells of a grid, ordered by key. Groups are disjoint and
/// together cover every row of the source.
struct PartitionSet {
  std::string source;
  GridSpec spec;
  std::vector<PartitionGroup> groups;
};

/// A per-cell, per-class centroid.
struct Prototype {
  std::vector<double> values;
  Label label = 0;
  std::size_t member_count = 0;
  PartitionKey source_key;
};

/// Throws std::invalid_argument for an empty set or n == 0.
GridSpec grid_spec(const Dataset& points, std::size_t n);

/// floor((v - min) / range) clamped into [0, n-1]; 0 for a constant
/// dimension. The maximum of the set lands in the last interval.
std::uint32_t interval_index(double v, double min, double range,
                             std::size_t n) noexcept;

PartitionKey cell_of(const GridSpec& spec, std::span<const double> values);

PartitionSet partition(const Dataset& points, std::size_t n);

/// Componentwise mean of the given rows. Rows must be non-empty and share
/// one label (std::invalid_argument otherwise).
Prototype extract_prototype(const Dataset& points,
                            std::span<const std::size_t> rows,
                            PartitionKey source_key = {});

/// Grid partitioning followed by one centroid per (cell, class) pair.
/// Output is ordered by (cell key, label).
std::vector<Prototype> psasa(const Dataset& points, std::size_t n);

/// Prototypes as a dataset with fresh ids 0..P-1 in the given order, sharing
/// the vocabulary of `like`.
Dataset prototypes_to_dataset(std::span<const Prototype> prototypes,
                              const Dataset& like, std::string name);

/// For each prototype, the row of the nearest same-label instance (distance
/// ties go to the lower id). Duplicates collapsed; result ascending by row.
/// Throws std::invalid_argument if a prototype's label has no instance.
std::vector<std::size_t> snap_to_instances(std::span<const Prototype> prototypes,
                                           const Dataset& points);

/// JSON dump of the partition: grid spec plus one entry per cell with its
/// key, member count and per-label counts.
std::string partition_to_json(const PartitionSet& partitions,
                              const Dataset& points);

}  // namespace protoselect
