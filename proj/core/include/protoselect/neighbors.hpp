#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "protoselect/dataset.hpp"

namespace protoselect {

inline constexpr std::size_t kNoRow = std::numeric_limits<std::size_t>::max();

/// Majority label among `rows` (nearest first). A tie between classes goes
/// to the class of the nearest tied neighbor.
Label majority_vote(const Dataset& points, std::span<const std::size_t> rows);

/// Cached k-nearest-neighbor lists over one collection. A point is never its
/// own neighbor; lists are ordered by ascending distance, ties by ascending
/// instance id.
class NeighborIndex {
 public:
  NeighborIndex(const Dataset& points, std::size_t k);

  std::size_t k() const noexcept { return k_; }
  const Dataset& points() const noexcept { return *points_; }

  /// min(k, size-1) nearest rows of `row`.
  std::span<const std::size_t> neighbors(std::size_t row) const {
    return {lists_.data() + offsets_[row], offsets_[row + 1] - offsets_[row]};
  }

 private:
  const Dataset* points_;
  std::size_t k_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> lists_;
};

/// Squared distances from `row` to every row of `points`.
void squared_distances_from(const Dataset& points, std::size_t row,
                            std::vector<double>& out);

struct RankedRow {
  double d2;
  InstanceId id;
  std::size_t row;
};

/// Inserts `candidate` into `list` (sorted by (d2, id)) keeping at most
/// `capacity` entries. Returns false when the candidate did not make it.
bool insert_ranked(std::vector<RankedRow>& list, std::size_t capacity,
                   const RankedRow& candidate);

inline bool ranked_before(const RankedRow& a, const RankedRow& b) noexcept {
  return a.d2 < b.d2 || (a.d2 == b.d2 && a.id < b.id);
}

struct NearestEnemies {
  /// Row of the nearest differently-labeled point, kNoRow when none exists.
  std::vector<std::size_t> row;
  /// Squared distance to it, +inf when none exists.
  std::vector<double> d2;
};

NearestEnemies nearest_enemies(const Dataset& points);

}  // namespace protoselect
