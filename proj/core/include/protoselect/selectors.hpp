#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "protoselect/dataset.hpp"

namespace protoselect {

enum class Selector { none, enn, drop3, icf, lssm, lsbo };

/// CLI spelling: "none", "enn", "drop3", "icf", "lssm", "lsbo".
std::string_view selector_name(Selector s) noexcept;
/// Display name as used in result tables: "ENN", "DROP3", ...
std::string_view selector_display_name(Selector s) noexcept;
std::optional<Selector> parse_selector(std::string_view name);

struct SelectionResult {
  Selector algorithm = Selector::none;
  /// Kept rows of the input collection, ascending.
  std::vector<std::size_t> selected;
  std::map<std::string, std::size_t> params;
  std::chrono::duration<double> wall_time{};
  /// Non-empty when a degenerate input forced a pass-through.
  std::string warning;

  std::vector<InstanceId> selected_ids(const Dataset& input) const;
};

/// Edited Nearest Neighbor: drops every point whose k nearest neighbors
/// (over the whole input) vote for another class. Requires k < size.
SelectionResult enn(const Dataset& points, std::size_t k);

/// DROP3: ENN noise filter, then a decremental pass over the survivors in
/// descending nearest-enemy distance (ties by ascending id). x is dropped
/// when none of its associates (input points holding x among their k+1
/// nearest survivors) that are classified correctly with x would be
/// misclassified without it. Every input point, filtered or not, counts as a
/// potential associate; neighbor lists are repaired as points leave. The last
/// survivor is never dropped. Requires k + 1 < size.
SelectionResult drop3(const Dataset& points, std::size_t k);

/// Iterative Case Filtering: ENN noise filter, then rounds that drop every
/// point whose coverage set (points inside its nearest-enemy radius) is
/// larger than its reachable set (points whose radius contains it), until a
/// round drops nothing.
SelectionResult icf(const Dataset& points, std::size_t k);

/// Local Set-based Smoother: keeps x when usefulness u(x) >= harmfulness
/// h(x).
SelectionResult lssm(const Dataset& points);

/// Local Set Border selector: LSSm, then a greedy pass in ascending local-set
/// size (ties by ascending id) keeping x when none of its local set is kept.
SelectionResult lsbo(const Dataset& points);

/// Dispatch by name; Selector::none keeps everything.
SelectionResult run_selector(Selector s, const Dataset& points, std::size_t k);

/// Points strictly inside x's nearest-enemy radius (x itself excluded) and
/// the points whose coverage contains x. Rows ascending.
struct CoverageReachable {
  std::vector<std::size_t> coverage;
  std::vector<std::size_t> reachable;
};
CoverageReachable coverage_reachable(const Dataset& points, std::size_t row);

/// Points strictly closer to x than its nearest enemy, x included.
/// Throws std::invalid_argument when x has no enemy.
std::vector<std::size_t> local_set(const Dataset& points, std::size_t row);

}  // namespace protoselect
