#include "protoselect/selectors.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "protoselect/neighbors.hpp"
#include "protoselect/parallel.hpp"

namespace protoselect {

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::array<std::string_view, 6> kNames = {"none", "enn",  "drop3",
                                                    "icf",  "lssm", "lsbo"};
constexpr std::array<std::string_view, 6> kDisplay = {"None", "ENN",  "DROP3",
                                                      "ICF",  "LSSm", "LSBo"};

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void require_k(const Dataset& points, std::size_t k, std::size_t extra, const char* who) {
  if (k == 0) throw std::invalid_argument(std::string(who) + ": k must be at least 1");
  if (points.size() <= k + extra) {
    throw std::invalid_argument(std::string(who) + ": needs more than " +
                                std::to_string(k + extra) + " points, got " +
                                std::to_string(points.size()));
  }
}

// Translate rows of `sub` (built from `parent_rows` of the parent) back.
std::vector<std::size_t> lift(std::span<const std::size_t> parent_rows,
                              std::span<const std::size_t> sub_rows) {
  std::vector<std::size_t> out;
  out.reserve(sub_rows.size());
  for (std::size_t r : sub_rows) out.push_back(parent_rows[r]);
  std::sort(out.begin(), out.end());
  return out;
}

// Rows kept by ENN, in ascending order. Empty when every point fails.
std::vector<std::size_t> enn_rows(const Dataset& points, std::size_t k) {
  const NeighborIndex index(points, k);
  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < points.size(); ++r) {
    if (majority_vote(points, index.neighbors(r)) == points.label(r)) kept.push_back(r);
  }
  return kept;
}

// |coverage(x)| and |reachable(x)| for every x, without materializing sets.
void coverage_reachable_counts(const Dataset& points, const NearestEnemies& ne,
                               std::vector<std::size_t>& coverage,
                               std::vector<std::size_t>& reachable) {
  const std::size_t n = points.size();
  coverage.assign(n, 0);
  reachable.assign(n, 0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d2;
    for (std::size_t x = begin; x < end; ++x) {
      squared_distances_from(points, x, d2);
      std::size_t cov = 0;
      std::size_t reach = 0;
      for (std::size_t y = 0; y < n; ++y) {
        if (y == x) continue;
        if (d2[y] < ne.d2[x]) ++cov;
        if (d2[y] < ne.d2[y]) ++reach;
      }
      coverage[x] = cov;
      reachable[x] = reach;
    }
  });
}

// Local-set size of every point (x included).
std::vector<std::size_t> local_set_sizes(const Dataset& points, const NearestEnemies& ne) {
  std::vector<std::size_t> coverage, reachable;
  coverage_reachable_counts(points, ne, coverage, reachable);
  for (auto& c : coverage) ++c;
  return coverage;
}

// Rows with u(x) >= h(x).
std::vector<std::size_t> lssm_rows(const Dataset& points, const NearestEnemies& ne) {
  const std::size_t n = points.size();
  std::vector<std::size_t> coverage, reachable;
  coverage_reachable_counts(points, ne, coverage, reachable);
  std::vector<std::size_t> harm(n, 0);
  for (std::size_t y = 0; y < n; ++y) {
    if (ne.row[y] != kNoRow) ++harm[ne.row[y]];
  }
  std::vector<std::size_t> kept;
  for (std::size_t x = 0; x < n; ++x) {
    // u(x) counts x's own local set plus every local set that reaches x.
    const std::size_t usefulness = reachable[x] + 1;
    if (usefulness >= harm[x]) kept.push_back(x);
  }
  return kept;
}

SelectionResult finish(Selector s, std::vector<std::size_t> rows, Clock::time_point start,
                       std::map<std::string, std::size_t> params = {},
                       std::string warning = {}) {
  SelectionResult out;
  out.algorithm = s;
  out.selected = std::move(rows);
  out.params = std::move(params);
  out.warning = std::move(warning);
  out.wall_time = Clock::now() - start;
  return out;
}

}  // namespace

std::string_view selector_name(Selector s) noexcept {
  return kNames[static_cast<std::size_t>(s)];
}

std::string_view selector_display_name(Selector s) noexcept {
  return kDisplay[static_cast<std::size_t>(s)];
}

std::optional<Selector> parse_selector(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<Selector>(i);
  }
  return std::nullopt;
}

std::vector<InstanceId> SelectionResult::selected_ids(const Dataset& input) const {
  std::vector<InstanceId> ids;
  ids.reserve(selected.size());
  for (std::size_t r : selected) ids.push_back(input.id(r));
  return ids;
}

SelectionResult enn(const Dataset& points, std::size_t k) {
  const auto start = Clock::now();
  require_k(points, k, 0, "enn");
  auto kept = enn_rows(points, k);
  if (kept.empty()) {
    return finish(Selector::enn, all_rows(points.size()), start, {{"k", k}},
                  "every point failed the neighbor vote; input kept unchanged");
  }
  return finish(Selector::enn, std::move(kept), start, {{"k", k}});
}

SelectionResult drop3(const Dataset& points, std::size_t k) {
  const auto start = Clock::now();
  require_k(points, k, 1, "drop3");
  const std::size_t n = points.size();
  const std::size_t capacity = k + 1;

  std::vector<std::size_t> survivors = enn_rows(points, k);
  std::string warning;
  if (survivors.empty()) {
    survivors = all_rows(n);
    warning = "noise filter removed every point; decremental pass ran on the full input";
  }
  std::vector<char> in_s(n, 0);
  for (std::size_t r : survivors) in_s[r] = 1;

  // k+1 nearest survivors of every input point, and the reverse lists.
  // Since survivors only ever leave, nbr[a] is always the first k+1 live
  // entries of a's ranking; spare[a] caches the next few entries of that
  // ranking so most repairs avoid a full scan.
  constexpr std::size_t kSpare = 16;
  std::vector<std::vector<RankedRow>> nbr(n);
  std::vector<std::vector<RankedRow>> spare(n);
  std::vector<std::size_t> cursor(n, 0);
  std::vector<std::vector<std::size_t>> assoc(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<double> d2;
    std::vector<RankedRow> ranked;
    for (std::size_t a = begin; a < end; ++a) {
      squared_distances_from(points, a, d2);
      ranked.clear();
      for (std::size_t s = 0; s < n; ++s) {
        if (s != a && in_s[s]) insert_ranked(ranked, capacity + kSpare, {d2[s], points.id(s), s});
      }
      const std::size_t head = std::min(capacity, ranked.size());
      nbr[a].assign(ranked.begin(), ranked.begin() + head);
      spare[a].assign(ranked.begin() + head, ranked.end());
    }
  });
  for (std::size_t a = 0; a < n; ++a) {
    for (const auto& e : nbr[a]) assoc[e.row].push_back(a);
  }

  // Visit order: farthest from the class border first.
  const Dataset filtered = points.subset(survivors);
  const NearestEnemies ne = nearest_enemies(filtered);
  std::vector<std::size_t> order(survivors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ne.d2[a] != ne.d2[b]) return ne.d2[a] > ne.d2[b];
    return filtered.id(a) < filtered.id(b);
  });

  std::vector<std::size_t> voters;
  auto classified = [&](std::size_t a, std::size_t skip) {
    voters.clear();
    for (const auto& e : nbr[a]) {
      if (e.row == skip) continue;
      if (voters.size() == k) break;
      voters.push_back(e.row);
    }
    return !voters.empty() && majority_vote(points, voters) == points.label(a);
  };

  std::size_t remaining = survivors.size();
  std::vector<std::size_t> live = survivors;
  for (std::size_t pos : order) {
    const std::size_t x = survivors[pos];
    // x may go only if no associate it currently helps classify correctly
    // would be misclassified without it.
    const bool harmless = std::none_of(assoc[x].begin(), assoc[x].end(), [&](std::size_t a) {
      return classified(a, kNoRow) && !classified(a, x);
    });
    if (!harmless || remaining == 1) continue;

    in_s[x] = 0;
    --remaining;
    if (2 * remaining < live.size()) std::erase_if(live, [&](std::size_t r) { return !in_s[r]; });
    for (std::size_t a : assoc[x]) {
      auto& list = nbr[a];
      list.erase(std::find_if(list.begin(), list.end(),
                              [x](const RankedRow& e) { return e.row == x; }));
      RankedRow best{std::numeric_limits<double>::infinity(), 0, kNoRow};
      auto& queue = spare[a];
      while (cursor[a] < queue.size() && !in_s[queue[cursor[a]].row]) ++cursor[a];
      if (cursor[a] < queue.size()) {
        best = queue[cursor[a]++];
      } else if (queue.size() == kSpare) {
        // Cache ran dry: rank the live survivors past the last cached entry.
        const RankedRow floor = queue.back();
        const double* av = points.values(a).data();
        queue.clear();
        cursor[a] = 0;
        for (std::size_t s : live) {
          if (!in_s[s] || s == a) continue;
          const RankedRow cand{squared_distance(av, points.values(s).data(), points.dim()),
                               points.id(s), s};
          if (ranked_before(floor, cand)) insert_ranked(queue, kSpare, cand);
        }
        if (!queue.empty()) best = queue[cursor[a]++];
      }
      if (best.row != kNoRow) {
        insert_ranked(list, capacity, best);
        assoc[best.row].push_back(a);
      }
    }
    assoc[x].clear();
  }

  std::vector<std::size_t> kept;
  for (std::size_t r = 0; r < n; ++r) {
    if (in_s[r]) kept.push_back(r);
  }
  return finish(Selector::drop3, std::move(kept), start, {{"k", k}}, std::move(warning));
}

SelectionResult icf(const Dataset& points, std::size_t k) {
  const auto start = Clock::now();
  require_k(points, k, 0, "icf");
  std::vector<std::size_t> current = enn_rows(points, k);
  if (current.empty()) current = all_rows(points.size());

  std::size_t rounds = 0;
  std::vector<std::size_t> coverage, reachable;
  while (true) {
    const Dataset cur = points.subset(current);
    if (cur.class_count() < 2) {
      return finish(Selector::icf, std::move(current), start, {{"k", k}, {"rounds", rounds}},
                    "fewer than two classes after filtering; filtered set returned");
    }
    const NearestEnemies ne = nearest_enemies(cur);
    coverage_reachable_counts(cur, ne, coverage, reachable);
    std::vector<std::size_t> next;
    next.reserve(current.size());
    for (std::size_t x = 0; x < cur.size(); ++x) {
      if (coverage[x] <= reachable[x]) next.push_back(current[x]);
    }
    ++rounds;
    if (next.size() == current.size()) break;
    current = std::move(next);
  }
  return finish(Selector::icf, std::move(current), start, {{"k", k}, {"rounds", rounds}});
}

SelectionResult lssm(const Dataset& points) {
  const auto start = Clock::now();
  if (points.empty()) throw std::invalid_argument("lssm: empty input");
  if (points.class_count() < 2) {
    return finish(Selector::lssm, all_rows(points.size()), start, {},
                  "single-class input; nearest enemy undefined, input kept unchanged");
  }
  return finish(Selector::lssm, lssm_rows(points, nearest_enemies(points)), start);
}

SelectionResult lsbo(const Dataset& points) {
  const auto start = Clock::now();
  if (points.empty()) throw std::invalid_argument("lsbo: empty input");
  if (points.class_count() < 2) {
    return finish(Selector::lsbo, all_rows(points.size()), start, {},
                  "single-class input; nearest enemy undefined, input kept unchanged");
  }
  const std::vector<std::size_t> smoothed = lssm_rows(points, nearest_enemies(points));
  const Dataset filtered = points.subset(smoothed);
  if (filtered.class_count() < 2) {
    return finish(Selector::lsbo, smoothed, start, {},
                  "single class left after smoothing; smoothed set returned");
  }

  const NearestEnemies ne = nearest_enemies(filtered);
  const std::vector<std::size_t> ls_size = local_set_sizes(filtered, ne);
  std::vector<std::size_t> order(filtered.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (ls_size[a] != ls_size[b]) return ls_size[a] < ls_size[b];
    return filtered.id(a) < filtered.id(b);
  });

  std::vector<std::size_t> chosen;
  const std::size_t m = filtered.dim();
  for (std::size_t x : order) {
    const double* xv = filtered.values(x).data();
    const bool overlaps = std::any_of(chosen.begin(), chosen.end(), [&](std::size_t s) {
      return squared_distance(xv, filtered.values(s).data(), m) < ne.d2[x];
    });
    if (!overlaps) chosen.push_back(x);
  }
  return finish(Selector::lsbo, lift(smoothed, chosen), start);
}

SelectionResult run_selector(Selector s, const Dataset& points, std::size_t k) {
  switch (s) {
    case Selector::none: {
      SelectionResult out;
      out.algorithm = Selector::none;
      out.selected = all_rows(points.size());
      return out;
    }
    case Selector::enn: return enn(points, k);
    case Selector::drop3: return drop3(points, k);
    case Selector::icf: return icf(points, k);
    case Selector::lssm: return lssm(points);
    case Selector::lsbo: return lsbo(points);
  }
  throw std::invalid_argument("unknown selector");
}

CoverageReachable coverage_reachable(const Dataset& points, std::size_t row) {
  if (row >= points.size()) throw std::out_of_range("coverage_reachable: row out of range");
  const NearestEnemies ne = nearest_enemies(points);
  if (ne.row[row] == kNoRow) {
    throw std::invalid_argument("coverage_reachable: point has no enemy");
  }
  CoverageReachable out;
  std::vector<double> d2;
  squared_distances_from(points, row, d2);
  for (std::size_t y = 0; y < points.size(); ++y) {
    if (y == row) continue;
    if (d2[y] < ne.d2[row]) out.coverage.push_back(y);
    if (d2[y] < ne.d2[y]) out.reachable.push_back(y);
  }
  return out;
}

std::vector<std::size_t> local_set(const Dataset& points, std::size_t row) {
  if (row >= points.size()) throw std::out_of_range("local_set: row out of range");
  const NearestEnemies ne = nearest_enemies(points);
  if (ne.row[row] == kNoRow) throw std::invalid_argument("local_set: point has no enemy");
  std::vector<double> d2;
  squared_distances_from(points, row, d2);
  std::vector<std::size_t> out;
  for (std::size_t y = 0; y < points.size(); ++y) {
    if (d2[y] < ne.d2[row]) out.push_back(y);
  }
  return out;
}

}  // namespace protoselect
