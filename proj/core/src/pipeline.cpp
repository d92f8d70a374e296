#include "protoselect/pipeline.hpp"

#include <stdexcept>

#include "protoselect/partitioning.hpp"

namespace protoselect {

namespace {

using Clock = std::chrono::steady_clock;

// Smallest input the selector accepts for the configured k.
std::size_t minimum_input(Selector s, std::size_t k) {
  switch (s) {
    case Selector::enn:
    case Selector::icf: return k + 1;
    case Selector::drop3: return k + 2;
    default: return 1;
  }
}

}  // namespace

void PipelineConfig::validate() const {
  if (n == 0) throw std::invalid_argument("pipeline: n must be at least 1");
  if (k == 0) throw std::invalid_argument("pipeline: k must be at least 1");
}

std::string PipelineConfig::algorithm_label() const {
  if (!use_psasa) return std::string(selector_display_name(selector));
  if (selector == Selector::none) return "PSASA";
  return "Fast " + std::string(selector_display_name(selector));
}

PipelineResult run_pipeline(const Dataset& train, const PipelineConfig& cfg) {
  cfg.validate();
  if (train.empty()) throw std::invalid_argument("pipeline: empty training set");

  PipelineResult out;
  Dataset candidates;
  if (cfg.use_psasa) {
    const auto t0 = Clock::now();
    const auto prototypes = psasa(train, cfg.n);
    if (cfg.snap) {
      candidates = train.subset(snap_to_instances(prototypes, train));
    } else {
      candidates = prototypes_to_dataset(prototypes, train, train.name() + "/psasa");
    }
    out.timing.psasa = Clock::now() - t0;
  } else {
    candidates = train;
  }
  out.candidate_count = candidates.size();

  if (candidates.size() < minimum_input(cfg.selector, cfg.k)) {
    out.warning = "only " + std::to_string(candidates.size()) + " candidates for " +
                  std::string(selector_name(cfg.selector)) + " with k=" +
                  std::to_string(cfg.k) + "; candidates kept unchanged";
    out.reduced = std::move(candidates);
    return out;
  }

  const auto t1 = Clock::now();
  const SelectionResult sel = run_selector(cfg.selector, candidates, cfg.k);
  out.timing.selector = Clock::now() - t1;
  out.warning = sel.warning;
  out.reduced = candidates.subset(sel.selected);
  return out;
}

}  // namespace protoselect
