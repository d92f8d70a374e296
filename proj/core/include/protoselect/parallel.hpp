#pragma once

#include <cstddef>
#include <functional>

namespace protoselect {

/// Worker count: PROTOSELECT_JOBS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
std::size_t default_jobs();

/// Runs body(begin, end) over contiguous chunks of [0, n). Each index is
/// visited exactly once; callers write only to per-index outputs so results
/// do not depend on the worker count.
void parallel_for(std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t jobs = default_jobs());

}  // namespace protoselect
