#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "protoselect/evaluation.hpp"
#include "protoselect/synthetic.hpp"
#include "protoselect_cli/cli.hpp"

namespace protoselect::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct DatasetEntry {
  std::string name;
  std::optional<Dataset> data;
  std::string error;
};

struct Variant {
  Selector selector;
  bool fast;
};

struct Grid {
  std::vector<DatasetEntry> datasets;
  std::vector<Variant> variants;
  std::size_t k = 3;
  std::size_t n = 5;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  bool snap = false;
  std::vector<std::size_t> n_values;
  std::vector<DatasetEntry> timing_datasets;
  std::vector<Variant> timing_variants;
  std::size_t repeats = 3;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Selector selector_from(const json& j) {
  const auto name = j.get<std::string>();
  const auto s = parse_selector(name);
  if (!s) throw std::invalid_argument("unknown selector \"" + name + "\" in grid");
  return *s;
}

std::vector<DatasetEntry> load_datasets(const json& list, const fs::path& base, bool normalize) {
  std::vector<DatasetEntry> out;
  for (const auto& item : list) {
    CsvOptions opts;
    fs::path path;
    if (item.is_string()) {
      path = item.get<std::string>();
    } else {
      path = item.at("path").get<std::string>();
      opts.label_column = item.value("label_column", std::string("last"));
      opts.name = item.value("name", std::string());
    }
    if (path.is_relative()) path = base / path;
    DatasetEntry entry;
    entry.name = opts.name.empty() ? path.stem().string() : opts.name;
    try {
      Dataset ds = load_csv(path, opts);
      entry.data = normalize ? minmax_scaled(ds) : std::move(ds);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<Variant> expand(const json& selectors, const json& variants) {
  std::vector<bool> modes;
  for (const auto& v : variants) {
    const auto name = v.get<std::string>();
    if (name == "original") modes.push_back(false);
    else if (name == "fast") modes.push_back(true);
    else throw std::invalid_argument("unknown variant \"" + name + "\" in grid");
  }
  std::vector<Variant> out;
  for (const auto& s : selectors) {
    const Selector sel = selector_from(s);
    for (bool fast : modes) out.push_back({sel, fast});
  }
  return out;
}

Grid read_grid(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  const json doc = json::parse(in);
  const fs::path base = file.parent_path();

  Grid g;
  g.k = doc.value("k", std::size_t{3});
  g.n = doc.value("n", std::size_t{5});
  g.folds = doc.value("folds", std::size_t{10});
  g.seed = doc.value("seed", std::uint64_t{42});
  g.snap = doc.value("snap", false);
  const bool normalize = doc.value("normalize", false);
  g.n_values = doc.value("n_values", std::vector<std::size_t>{});

  const json default_variants = json::array({"original", "fast"});
  const json& variants = doc.contains("variants") ? doc["variants"] : default_variants;
  g.datasets = load_datasets(doc.at("datasets"), base, normalize);
  g.variants = expand(doc.at("selectors"), variants);

  if (doc.contains("timing")) {
    const json& t = doc["timing"];
    g.repeats = t.value("repeats", std::size_t{3});
    if (t.contains("datasets")) g.timing_datasets = load_datasets(t["datasets"], base, normalize);
    if (t.contains("synthetic")) {
      const json& s = t["synthetic"];
      BlobSpec spec;
      spec.size = s.value("size", spec.size);
      spec.classes = s.value("classes", spec.classes);
      spec.dims = s.value("dims", spec.dims);
      spec.spread = s.value("spread", spec.spread);
      spec.extent = s.value("extent", spec.extent);
      spec.seed = s.value("seed", spec.seed);
      DatasetEntry entry;
      entry.name = "blobs";
      entry.data = make_blobs(spec);
      g.timing_datasets.push_back(std::move(entry));
    }
    g.timing_variants = expand(t.contains("selectors") ? t["selectors"] : doc.at("selectors"),
                               t.contains("variants") ? t["variants"] : variants);
  } else {
    g.timing_variants = g.variants;
  }
  if (g.timing_datasets.empty()) g.timing_datasets = g.datasets;
  if (g.repeats == 0) throw std::invalid_argument("timing repeats must be positive");
  return g;
}

PipelineConfig config_for(const Grid& g, const Variant& v, std::size_t n) {
  PipelineConfig cfg;
  cfg.selector = v.selector;
  cfg.use_psasa = v.fast;
  cfg.n = n;
  cfg.k = g.k;
  cfg.snap = g.snap;
  return cfg;
}

// Runs tasks on up to `jobs` threads.
void run_tasks(std::vector<std::function<void()>>& tasks, std::size_t jobs) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) tasks[i]();
  };
  const std::size_t workers = std::min(std::max<std::size_t>(jobs, 1), tasks.size());
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
}

struct CellResult {
  bool ok = false;
  double accuracy = 0.0;
  double reduction = 0.0;
};

void write_table(const fs::path& path, const Grid& g, const std::vector<CellResult>& cells,
                 double CellResult::*field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "dataset";
  for (const auto& v : g.variants) out << ',' << config_for(g, v, g.n).algorithm_label();
  out << '\n';
  for (std::size_t d = 0; d < g.datasets.size(); ++d) {
    out << g.datasets[d].name;
    for (std::size_t v = 0; v < g.variants.size(); ++v) {
      const CellResult& c = cells[d * g.variants.size() + v];
      out << ',' << (c.ok ? fixed(c.*field) : "ERR");
    }
    out << '\n';
  }
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

int run_bench(const fs::path& grid_file, const fs::path& out_dir, std::size_t jobs,
              std::ostream& err) {
  const Grid g = read_grid(grid_file);
  fs::create_directories(out_dir);
  std::mutex log_mutex;
  auto log_failure = [&](const std::string& what, const std::string& why) {
    std::lock_guard lock(log_mutex);
    err << "ERR " << what << ": " << why << '\n';
  };
  for (const auto& d : g.datasets) {
    if (!d.data) log_failure(d.name, d.error);
  }

  // Accuracy and reduction tables.
  std::vector<CellResult> cells(g.datasets.size() * g.variants.size());
  std::vector<std::function<void()>> tasks;
  for (std::size_t d = 0; d < g.datasets.size(); ++d) {
    if (!g.datasets[d].data) continue;
    for (std::size_t v = 0; v < g.variants.size(); ++v) {
      tasks.emplace_back([&, d, v] {
        const PipelineConfig cfg = config_for(g, g.variants[v], g.n);
        try {
          const auto r = run_experiment(*g.datasets[d].data, cfg, g.folds, g.seed);
          cells[d * g.variants.size() + v] = {true, r.mean_accuracy, r.mean_reduction};
        } catch (const std::exception& e) {
          log_failure(g.datasets[d].name + " " + cfg.algorithm_label(), e.what());
        }
      });
    }
  }
  run_tasks(tasks, jobs);
  write_table(out_dir / "accuracy.csv", g, cells, &CellResult::accuracy);
  write_table(out_dir / "reduction.csv", g, cells, &CellResult::reduction);

  // n-sweep over the fast variants.
  if (g.n_values.size() > 1) {
    std::vector<Variant> fast;
    for (const auto& v : g.variants) {
      if (v.fast) fast.push_back(v);
    }
    const std::size_t per_dataset = fast.size() * g.n_values.size();
    std::vector<CellResult> sweep(g.datasets.size() * per_dataset);
    tasks.clear();
    for (std::size_t d = 0; d < g.datasets.size(); ++d) {
      if (!g.datasets[d].data) continue;
      for (std::size_t v = 0; v < fast.size(); ++v) {
        for (std::size_t i = 0; i < g.n_values.size(); ++i) {
          tasks.emplace_back([&, d, v, i] {
            const PipelineConfig cfg = config_for(g, fast[v], g.n_values[i]);
            try {
              const auto r = run_experiment(*g.datasets[d].data, cfg, g.folds, g.seed);
              sweep[d * per_dataset + v * g.n_values.size() + i] = {true, r.mean_accuracy,
                                                                    r.mean_reduction};
            } catch (const std::exception& e) {
              log_failure(g.datasets[d].name + " " + cfg.algorithm_label() + " n=" +
                              std::to_string(cfg.n),
                          e.what());
            }
          });
        }
      }
    }
    run_tasks(tasks, jobs);
    std::ofstream out(out_dir / "nsweep.csv", std::ios::binary);
    out << "dataset,algorithm,n,mean_accuracy,mean_reduction\n";
    for (std::size_t d = 0; d < g.datasets.size(); ++d) {
      for (std::size_t v = 0; v < fast.size(); ++v) {
        for (std::size_t i = 0; i < g.n_values.size(); ++i) {
          const CellResult& c = sweep[d * per_dataset + v * g.n_values.size() + i];
          out << g.datasets[d].name << ',' << config_for(g, fast[v], g.n).algorithm_label() << ','
              << g.n_values[i] << ',' << (c.ok ? fixed(c.accuracy) : "ERR") << ','
              << (c.ok ? fixed(c.reduction) : "ERR") << '\n';
        }
      }
    }
  }

  // Timing cells run one at a time on the whole dataset.
  std::ofstream timing(out_dir / "timing.csv", std::ios::binary);
  timing << "dataset,algorithm,repeats,candidates,output_size,median_psasa_seconds,"
            "median_selector_seconds,median_total_seconds\n";
  for (const auto& d : g.timing_datasets) {
    for (const auto& v : g.timing_variants) {
      const PipelineConfig cfg = config_for(g, v, g.n);
      timing << d.name << ',' << cfg.algorithm_label() << ',' << g.repeats << ',';
      if (!d.data) {
        timing << "ERR,ERR,ERR,ERR,ERR\n";
        continue;
      }
      try {
        std::vector<double> psasa, selector, total;
        PipelineResult last;
        for (std::size_t r = 0; r < g.repeats; ++r) {
          last = run_pipeline(*d.data, cfg);
          psasa.push_back(last.timing.psasa.count());
          selector.push_back(last.timing.selector.count());
          total.push_back(last.timing.total().count());
        }
        timing << last.candidate_count << ',' << last.reduced.size() << ',' << fixed(median(psasa), 9)
               << ',' << fixed(median(selector), 9) << ',' << fixed(median(total), 9) << '\n';
      } catch (const std::exception& e) {
        log_failure(d.name + " " + cfg.algorithm_label() + " timing", e.what());
        timing << "ERR,ERR,ERR,ERR,ERR\n";
      }
    }
  }
  return kOk;
}

}  // namespace protoselect::cli
