#pragma once

#include <chrono>
#include <cstddef>
#include <string>

#include "protoselect/dataset.hpp"
#include "protoselect/selectors.hpp"

namespace protoselect {

struct PipelineConfig {
  bool use_psasa = false;
  std::size_t n = 5;
  Selector selector = Selector::none;
  std::size_t k = 3;
  /// Replace each prototype by its nearest same-label training instance
  /// before the selector runs, so the output is a subset of the input.
  bool snap = false;

  /// Throws std::invalid_argument when n or k is zero.
  void validate() const;
  /// "ENN", "Fast ENN", "PSASA" (fast, no selector), "None".
  std::string algorithm_label() const;
};

struct PipelineTiming {
  std::chrono::duration<double> psasa{};
  std::chrono::duration<double> selector{};
  std::chrono::duration<double> total() const { return psasa + selector; }
};

struct PipelineResult {
  Dataset reduced;
  /// Size of the collection handed to the selector.
  std::size_t candidate_count = 0;
  PipelineTiming timing;
  std::string warning;
};

/// Original variant: the selector runs on `train`. Fast variant: PSASA
/// prototypes (fresh ids in (cell, label) order) are the selector's input.
/// Candidate sets too small for the selector's neighborhood pass through
/// unchanged with a warning.
PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& cfg);

}  // namespace protoselect
