#include "protoselect/neighbors.hpp"

#include <algorithm>
#include <stdexcept>

#include "protoselect/parallel.hpp"

namespace protoselect {

Label majority_vote(const Dataset& points, std::span<const std::size_t> rows) {
  if (rows.empty()) throw std::invalid_argument("majority_vote: no voters");
  std::vector<std::size_t> counts(points.label_names().size(), 0);
  std::size_t best = 0;
  for (std::size_t r : rows) best = std::max(best, ++counts[points.label(r)]);
  for (std::size_t r : rows) {
    if (counts[points.label(r)] == best) return points.label(r);
  }
  return points.label(rows.front());
}

void squared_distances_from(const Dataset& points, std::size_t row,
                            std::vector<double>& out) {
  const std::size_t n = points.size();
  const std::size_t m = points.dim();
  out.resize(n);
  const double* base = points.raw_values().data();
  const double* x = base + row * m;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = squared_distance(x, base + j * m, m);
  }
}

bool insert_ranked(std::vector<RankedRow>& list, std::size_t capacity,
                   const RankedRow& candidate) {
  if (capacity == 0) return false;
  if (list.size() == capacity && !ranked_before(candidate, list.back())) {
    return false;
  }
  const auto pos = std::upper_bound(list.begin(), list.end(), candidate, ranked_before);
  list.insert(pos, candidate);
  if (list.size() > capacity) list.pop_back();
  return true;
}

NeighborIndex::NeighborIndex(const Dataset& points, std::size_t k)
    : points_(&points), k_(k) {
  const std::size_t n = points.size();
  const std::size_t per_row = n == 0 ? 0 : std::min(k, n - 1);
  offsets_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) offsets_[i] = i * per_row;
  lists_.assign(n * per_row, 0);

  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d2;
    std::vector<RankedRow> best;
    best.reserve(per_row + 1);
    for (std::size_t i = begin; i < end; ++i) {
      squared_distances_from(points, i, d2);
      best.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) insert_ranked(best, per_row, {d2[j], points.id(j), j});
      }
      for (std::size_t t = 0; t < best.size(); ++t) {
        lists_[offsets_[i] + t] = best[t].row;
      }
    }
  });
}

NearestEnemies nearest_enemies(const Dataset& points) {
  const std::size_t n = points.size();
  NearestEnemies out;
  out.row.assign(n, kNoRow);
  out.d2.assign(n, std::numeric_limits<double>::infinity());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d2;
    for (std::size_t i = begin; i < end; ++i) {
      squared_distances_from(points, i, d2);
      const Label li = points.label(i);
      std::size_t best = kNoRow;
      for (std::size_t j = 0; j < n; ++j) {
        if (points.label(j) == li) continue;
        if (best == kNoRow || d2[j] < d2[best] ||
            (d2[j] == d2[best] && points.id(j) < points.id(best))) {
          best = j;
        }
      }
      out.row[i] = best;
      if (best != kNoRow) out.d2[i] = d2[best];
    }
  });
  return out;
}

}  // namespace protoselect
