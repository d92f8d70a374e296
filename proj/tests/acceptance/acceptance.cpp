// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Tolerances are pinned below.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "protoselect/evaluation.hpp"
#include "protoselect/partitioning.hpp"
#include "protoselect/synthetic.hpp"

using namespace protoselect;

namespace {

constexpr std::size_t kFolds = 10;
constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kK = 3;
constexpr std::size_t kN = 5;
constexpr double kTolerance = 0.05;
constexpr double kWideTolerance = 0.07;
constexpr double kMetricSeconds = 60.0;
constexpr double kTrendAccuracySlack = 0.03;
constexpr double kDrop3Speedup = 2.0;
constexpr double kIdentityFloor = 0.93;
constexpr int kGridFixtures = 200;
constexpr int kSelectorFixtures = 100;

using Clock = std::chrono::steady_clock;

int failures = 0;
int total = 0;

void verdict(const std::string& name, bool pass, const std::string& detail) {
  ++total;
  if (!pass) ++failures;
  std::printf("%s  %-44s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Dataset load(const std::string& name) {
  return load_csv(std::string(PROTOSELECT_TEST_DATA_DIR "/") + name + ".csv");
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1. metric reproduction ----

struct MetricTarget {
  const char* dataset;
  Selector selector;
  bool fast;
  bool accuracy;  // false: reduction
  double target;
  double tolerance;
};

void metric_reproduction() {
  const MetricTarget targets[] = {
      {"iris", Selector::lssm, false, true, 0.96, kTolerance},
      {"iris", Selector::enn, false, true, 0.97, kTolerance},
      {"iris", Selector::lsbo, false, false, 0.92, kTolerance},
      {"iris", Selector::lsbo, true, false, 0.95, kTolerance},
      {"iris", Selector::enn, false, false, 0.04, kTolerance},
      {"iris", Selector::enn, true, false, 0.67, kTolerance},
      {"wine", Selector::lssm, false, true, 0.71, kTolerance},
      {"wine", Selector::lssm, true, true, 0.79, kWideTolerance},
      {"wine", Selector::drop3, false, false, 0.80, kTolerance},
      {"glass", Selector::drop3, true, false, 0.86, kTolerance},
      {"glass", Selector::drop3, false, false, 0.75, kTolerance},
      {"glass", Selector::drop3, false, true, 0.63, kWideTolerance},
      {"ecoli", Selector::icf, false, false, 0.87, kTolerance},
      {"ecoli", Selector::icf, true, false, 0.88, kTolerance},
  };
  for (const auto& t : targets) {
    PipelineConfig cfg;
    cfg.selector = t.selector;
    cfg.use_psasa = t.fast;
    cfg.k = kK;
    cfg.n = kN;
    const auto t0 = Clock::now();
    const auto report = run_experiment(load(t.dataset), cfg, kFolds, kSeed);
    const double elapsed = seconds_since(t0);
    const double value = t.accuracy ? report.mean_accuracy : report.mean_reduction;
    const bool pass = std::abs(value - t.target) <= t.tolerance + 1e-12 && elapsed < kMetricSeconds;
    verdict(fmt("1 %s %s %s", t.dataset, cfg.algorithm_label().c_str(),
                t.accuracy ? "accuracy" : "reduction"),
            pass, fmt("got %.4f, want %.2f +/- %.2f (%.2fs)", value, t.target, t.tolerance, elapsed));
  }
}

// ---- 2. trends ----

void n_sweep_trend() {
  double red_lo = 0, red_hi = 0, acc_lo = 0, acc_hi = 0;
  std::size_t cells = 0;
  for (const char* name : {"iris", "glass", "wine"}) {
    const auto ds = load(name);
    for (auto s : {Selector::enn, Selector::drop3, Selector::icf, Selector::lssm, Selector::lsbo}) {
      PipelineConfig cfg;
      cfg.selector = s;
      cfg.use_psasa = true;
      cfg.n = 2;
      const auto lo = run_experiment(ds, cfg, kFolds, kSeed);
      cfg.n = 20;
      const auto hi = run_experiment(ds, cfg, kFolds, kSeed);
      red_lo += lo.mean_reduction;
      red_hi += hi.mean_reduction;
      acc_lo += lo.mean_accuracy;
      acc_hi += hi.mean_accuracy;
      ++cells;
    }
  }
  const double c = static_cast<double>(cells);
  red_lo /= c, red_hi /= c, acc_lo /= c, acc_hi /= c;
  verdict("2 n-sweep reduction n=2 > n=20", red_lo > red_hi,
          fmt("mean reduction %.4f at n=2, %.4f at n=20", red_lo, red_hi));
  verdict("2 n-sweep accuracy n=20 >= n=2 - 0.03", acc_hi >= acc_lo - kTrendAccuracySlack,
          fmt("mean accuracy %.4f at n=2, %.4f at n=20", acc_lo, acc_hi));
}

void runtime_trend() {
  const Dataset blobs = make_blobs({});  // 20000 x 16, 10 classes
  for (auto s : {Selector::enn, Selector::lssm, Selector::lsbo, Selector::icf, Selector::drop3}) {
    PipelineConfig cfg;
    cfg.selector = s;
    cfg.k = kK;
    cfg.n = kN;
    cfg.use_psasa = false;
    const double original = run_pipeline(blobs, cfg).timing.total().count();
    cfg.use_psasa = true;
    const double fast = run_pipeline(blobs, cfg).timing.total().count();
    const double speedup = original / fast;
    const bool pass = fast < original && (s != Selector::drop3 || speedup >= kDrop3Speedup);
    verdict(fmt("2 runtime %s faster%s", cfg.algorithm_label().c_str(),
                s == Selector::drop3 ? " (>= 2x)" : ""),
            pass, fmt("original %.2fs, fast %.2fs, speedup %.2fx", original, fast, speedup));
  }
}

// ---- 3. oracle equivalence ----

template <class Check>
void oracle_suite(const std::string& name, int fixtures_count, std::uint64_t seed, Check check) {
  fixtures::Rng rng(seed);
  int mismatches = 0;
  for (int t = 0; t < fixtures_count; ++t) {
    if (!check(rng)) ++mismatches;
  }
  verdict("3 oracle " + name, mismatches == 0,
          fmt("%d/%d fixtures match", fixtures_count - mismatches, fixtures_count));
}

Dataset grid_fixture(fixtures::Rng& rng) {
  fixtures::Spec spec;
  spec.max_size = 100;
  spec.max_dim = 5;
  spec.max_classes = 4;
  return fixtures::random_dataset(rng, spec);
}

std::vector<std::size_t> to_vec(const std::set<std::size_t>& s) { return {s.begin(), s.end()}; }

void oracle_equivalence() {
  constexpr std::size_t ns[] = {1, 2, 3, 5};

  oracle_suite("partition", kGridFixtures, 11, [&](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    const auto pts = oracle::from(ds);
    for (std::size_t n : ns) {
      const auto got = partition(ds, n);
      const auto want = oracle::cells(pts, n);
      if (got.groups.size() != want.size()) return false;
      std::size_t i = 0;
      for (const auto& [key, rows] : want) {
        if (got.groups[i].key.indices != key || got.groups[i].rows != rows) return false;
        ++i;
      }
    }
    return true;
  });

  auto same_centroids = [](const std::vector<Prototype>& got,
                           const std::vector<oracle::Centroid>& want) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i].source_key.indices != want[i].key || got[i].label != want[i].label ||
          got[i].member_count != want[i].members) {
        return false;
      }
      for (std::size_t j = 0; j < want[i].mean.size(); ++j) {
        if (std::abs(got[i].values[j] - want[i].mean[j]) > 1e-12 * (1 + std::abs(want[i].mean[j])))
          return false;
      }
    }
    return true;
  };

  oracle_suite("psasa", kGridFixtures, 12, [&](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    const auto pts = oracle::from(ds);
    for (std::size_t n : ns) {
      if (!same_centroids(psasa(ds, n), oracle::centroids(pts, n))) return false;
    }
    return true;
  });

  oracle_suite("extract_prototype", kGridFixtures, 13, [&](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    const auto pts = oracle::from(ds);
    for (std::size_t n : ns) {
      const auto cells = oracle::cells(pts, n);
      for (const auto& c : oracle::centroids(pts, n)) {
        std::vector<std::size_t> rows;
        for (std::size_t r : cells.at(c.key)) {
          if (pts.label[r] == c.label) rows.push_back(r);
        }
        const auto p = extract_prototype(ds, rows, PartitionKey{c.key});
        if (!same_centroids({p}, {c})) return false;
      }
    }
    return true;
  });

  auto two_class = [](fixtures::Rng& rng, std::size_t min) {
    return fixtures::random_two_class(rng, min, 40);
  };

  oracle_suite("enn", kSelectorFixtures, 21, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 4);
    return enn(ds, kK).selected == oracle::enn(oracle::from(ds), kK);
  });
  oracle_suite("icf", kSelectorFixtures, 22, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 4);
    return icf(ds, kK).selected == oracle::icf(oracle::from(ds), kK);
  });
  oracle_suite("lssm", kSelectorFixtures, 23, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 2);
    return lssm(ds).selected == oracle::lssm(oracle::from(ds));
  });
  oracle_suite("local_set", kSelectorFixtures, 24, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 2);
    const auto pts = oracle::from(ds);
    const auto pool = oracle::all(ds.size());
    for (std::size_t x = 0; x < ds.size(); ++x) {
      if (oracle::nearest_enemy(pts, x, pool) == SIZE_MAX) continue;
      if (local_set(ds, x) != to_vec(oracle::local_set(pts, x, pool))) return false;
    }
    return true;
  });
  oracle_suite("coverage_reachable", kSelectorFixtures, 25, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 2);
    const auto pts = oracle::from(ds);
    const auto pool = oracle::all(ds.size());
    for (std::size_t x = 0; x < ds.size(); ++x) {
      if (oracle::nearest_enemy(pts, x, pool) == SIZE_MAX) continue;
      const auto cr = coverage_reachable(ds, x);
      if (cr.coverage != to_vec(oracle::coverage(pts, x, pool))) return false;
      if (cr.reachable != to_vec(oracle::reachable(pts, x, pool))) return false;
    }
    return true;
  });
  oracle_suite("drop3", kSelectorFixtures, 26, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 5);
    return drop3(ds, kK).selected == oracle::drop3(oracle::from(ds), kK);
  });
  oracle_suite("lsbo", kSelectorFixtures, 27, [&](fixtures::Rng& rng) {
    const auto ds = two_class(rng, 2);
    return lsbo(ds).selected == oracle::lsbo(oracle::from(ds));
  });
}

// ---- 4. invariants ----

constexpr Selector kAll[] = {Selector::none, Selector::enn,  Selector::drop3,
                             Selector::icf,  Selector::lssm, Selector::lsbo};

void invariant(const std::string& name, std::uint64_t seed, int count,
               const std::function<bool(fixtures::Rng&)>& check) {
  fixtures::Rng rng(seed);
  int bad = 0;
  for (int t = 0; t < count; ++t) bad += check(rng) ? 0 : 1;
  verdict("4 invariant " + name, bad == 0, fmt("%d/%d fixtures hold", count - bad, count));
}

void invariants() {
  invariant("disjoint cover", 31, 200, [](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      std::vector<int> seen(ds.size(), 0);
      for (const auto& g : partition(ds, n).groups) {
        for (std::size_t r : g.rows) ++seen[r];
      }
      if (!std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; })) return false;
    }
    return true;
  });

  invariant("grid refinement", 32, 200, [](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      const auto coarse = grid_spec(ds, n), fine = grid_spec(ds, 2 * n);
      for (std::size_t r = 0; r < ds.size(); ++r) {
        const auto c = cell_of(coarse, ds.values(r)).indices;
        const auto f = cell_of(fine, ds.values(r)).indices;
        for (std::size_t j = 0; j < c.size(); ++j) {
          if (f[j] / 2 != c[j]) return false;
        }
      }
      if (psasa(ds, 2 * n).size() < psasa(ds, n).size()) return false;
    }
    return true;
  });

  invariant("centroid in cell", 33, 200, [](fixtures::Rng& rng) {
    const auto ds = grid_fixture(rng);
    for (std::size_t n : {1u, 2u, 3u, 5u}) {
      const auto spec = grid_spec(ds, n);
      for (const auto& p : psasa(ds, n)) {
        for (std::size_t j = 0; j < ds.dim(); ++j) {
          const double slack = 1e-9 * (1.0 + std::abs(p.values[j]));
          if (p.values[j] < spec.lower(j, p.source_key.indices[j]) - slack) return false;
          if (p.values[j] > spec.upper(j, p.source_key.indices[j]) + slack) return false;
        }
      }
    }
    return true;
  });

  invariant("selected subset of input", 34, 100, [](fixtures::Rng& rng) {
    const auto ds = fixtures::random_two_class(rng, 5, 40);
    for (Selector s : kAll) {
      const auto sel = run_selector(s, ds, kK).selected;
      if (!std::is_sorted(sel.begin(), sel.end())) return false;
      if (std::adjacent_find(sel.begin(), sel.end()) != sel.end()) return false;
      if (!sel.empty() && sel.back() >= ds.size()) return false;
    }
    return true;
  });

  invariant("|output| <= |psasa| <= |train|", 35, 100, [](fixtures::Rng& rng) {
    const auto train = fixtures::random_two_class(rng, 6, 60);
    for (Selector s : kAll) {
      for (std::size_t n : {1u, 2u, 5u}) {
        PipelineConfig cfg;
        cfg.selector = s;
        cfg.use_psasa = true;
        cfg.n = n;
        const auto r = run_pipeline(train, cfg);
        if (r.reduced.size() > r.candidate_count || r.candidate_count > train.size()) return false;
      }
    }
    return true;
  });

  invariant("shuffle determinism", 36, 100, [](fixtures::Rng& rng) {
    const auto ds = fixtures::random_two_class(rng, 5, 40);
    const auto sh = fixtures::shuffled(ds, rng);
    for (Selector s : kAll) {
      auto a = run_selector(s, ds, kK).selected_ids(ds);
      auto b = run_selector(s, sh, kK).selected_ids(sh);
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return false;
    }
    return true;
  });

  invariant("fold disjointness", 37, 100, [](fixtures::Rng& rng) {
    fixtures::Spec spec;
    spec.min_size = 10;
    spec.max_size = 80;
    spec.max_classes = 5;
    const auto ds = fixtures::random_dataset(rng, spec);
    const auto fa = stratified_folds(ds, 10, rng.between(0, 1u << 20));
    std::vector<int> seen(ds.size(), 0);
    for (std::size_t f = 0; f < 10; ++f) {
      const auto test = fa.test_rows(f);
      const auto train = fa.train_rows(f);
      std::set<std::size_t> t(test.begin(), test.end());
      for (std::size_t r : train) {
        if (t.count(r)) return false;
      }
      if (test.size() + train.size() != ds.size()) return false;
      for (std::size_t r : test) ++seen[r];
    }
    return std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
  });
}

// ---- 5. identity pipeline ----

void identity_pipeline() {
  const auto report = run_experiment(load("iris"), {}, kFolds, kSeed);
  verdict("5 identity 3-NN accuracy on iris", report.mean_accuracy >= kIdentityFloor,
          fmt("got %.4f, floor %.2f", report.mean_accuracy, kIdentityFloor));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  metric_reproduction();
  n_sweep_trend();
  oracle_equivalence();
  invariants();
  identity_pipeline();
  runtime_trend();
  std::printf("%d/%d criteria passed in %.1fs\n", total - failures, total, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
