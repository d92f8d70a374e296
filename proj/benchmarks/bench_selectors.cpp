#include <benchmark/benchmark.h>

#include <map>

#include "protoselect/partitioning.hpp"
#include "protoselect/pipeline.hpp"
#include "protoselect/synthetic.hpp"

namespace {

using protoselect::Selector;

const protoselect::Dataset& blobs(std::size_t size) {
  static std::map<std::size_t, protoselect::Dataset> cache;
  auto it = cache.find(size);
  if (it == cache.end()) {
    protoselect::BlobSpec spec;
    spec.size = size;
    it = cache.emplace(size, protoselect::make_blobs(spec)).first;
  }
  return it->second;
}

// range(0): selector, range(1): 1 for the grid-accelerated variant.
void BM_Pipeline(benchmark::State& state) {
  protoselect::PipelineConfig cfg;
  cfg.selector = static_cast<Selector>(state.range(0));
  cfg.use_psasa = state.range(1) != 0;
  const auto& ds = blobs(static_cast<std::size_t>(state.range(2)));
  std::size_t kept = 0;
  for (auto _ : state) {
    const auto r = protoselect::run_pipeline(ds, cfg);
    kept = r.reduced.size();
    benchmark::DoNotOptimize(kept);
  }
  state.SetLabel(cfg.algorithm_label());
  state.counters["kept"] = static_cast<double>(kept);
}

void BM_Psasa(benchmark::State& state) {
  const auto& ds = blobs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(protoselect::psasa(ds, 5));
  }
}

void pipeline_args(benchmark::internal::Benchmark* b) {
  for (auto s : {Selector::enn, Selector::drop3, Selector::icf, Selector::lssm, Selector::lsbo}) {
    for (int fast : {0, 1}) b->Args({static_cast<long>(s), fast, 2000});
  }
}

}  // namespace

BENCHMARK(BM_Pipeline)->Apply(pipeline_args)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Psasa)->Arg(2000)->Arg(20000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
