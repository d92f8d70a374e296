#include "protoselect_cli/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "protoselect/dataset.hpp"
#include "protoselect/evaluation.hpp"
#include "protoselect/parallel.hpp"
#include "protoselect/partitioning.hpp"
#include "protoselect/synthetic.hpp"

namespace protoselect::cli {

namespace {

struct RunFlags {
  std::string data;
  std::string selector = "none";
  bool fast = false;
  std::size_t n = 5;
  std::size_t k = 3;
  std::size_t folds = 10;
  std::uint64_t seed = 42;
  bool snap = false;
  std::string label_column = "last";
  std::string output;
  std::string format = "json";
  bool normalize = false;
  std::size_t jobs = 0;
};

struct GenFlags {
  BlobSpec spec;
  std::string output;
};

struct PartitionFlags {
  std::string data;
  std::size_t n = 5;
  std::string label_column = "last";
  std::string output;
};

struct BenchFlags {
  std::string grid;
  std::string out_dir = ".";
  std::size_t jobs = 0;
};

std::vector<std::string> selector_names() {
  std::vector<std::string> names;
  for (auto s : {Selector::none, Selector::enn, Selector::drop3, Selector::icf,
                 Selector::lssm, Selector::lsbo}) {
    names.emplace_back(selector_name(s));
  }
  return names;
}

// Writes `text` to the named file, or to `out` when the name is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw DataError("cannot write " + path);
  file << text;
}

int cmd_run(const RunFlags& f, std::ostream& out, std::ostream& err) {
  Dataset ds = load_csv(f.data, {f.label_column, {}});
  if (f.normalize) ds = minmax_scaled(ds);

  PipelineConfig cfg;
  cfg.selector = *parse_selector(f.selector);
  cfg.use_psasa = f.fast;
  cfg.n = f.n;
  cfg.k = f.k;
  cfg.snap = f.snap;

  const std::size_t jobs = f.jobs == 0 ? default_jobs() : f.jobs;
  const EvaluationReport report = run_experiment(ds, cfg, f.folds, f.seed, jobs);

  std::string text;
  if (f.format == "csv") {
    text = report_csv_header() + '\n' + report_csv_row(report) + '\n';
  } else {
    text = report_to_json(report) + '\n';
  }
  emit(f.output, text, out);

  char line[256];
  std::snprintf(line, sizeof line, "%s %s: accuracy %.4f, reduction %.4f, %.4fs per fold\n",
                report.dataset.c_str(), cfg.algorithm_label().c_str(), report.mean_accuracy,
                report.mean_reduction, report.mean_total_time);
  err << line;
  for (const auto& w : report.warnings) err << "warning: " << w << '\n';
  return kOk;
}

int cmd_gen(const GenFlags& f, std::ostream& out) {
  const Dataset ds = make_blobs(f.spec);
  std::vector<std::string> header;
  for (std::size_t j = 0; j < ds.dim(); ++j) header.push_back("x" + std::to_string(j));
  header.emplace_back("label");
  std::ostringstream text;
  write_csv(ds, text, header);
  emit(f.output, text.str(), out);
  return kOk;
}

int cmd_partition(const PartitionFlags& f, std::ostream& out) {
  const Dataset ds = load_csv(f.data, {f.label_column, {}});
  emit(f.output, partition_to_json(partition(ds, f.n), ds) + '\n', out);
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prototype selection with grid-based acceleration", "protoselect"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "Cross-validate one pipeline on a CSV dataset");
  run_cmd->add_option("--data", run.data, "CSV file, class in the label column")->required();
  run_cmd->add_option("--selector", run.selector, "none, enn, drop3, icf, lssm or lsbo")
      ->check(CLI::IsMember(selector_names()))
      ->capture_default_str();
  run_cmd->add_flag("--fast", run.fast, "Run the selector on grid prototypes");
  run_cmd->add_option("--n", run.n, "Grid intervals per dimension")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--k", run.k, "Neighbors for selection and classification")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  run_cmd->add_option("--folds", run.folds, "Cross-validation folds")
      ->check(CLI::Range(std::size_t{2}, std::numeric_limits<std::size_t>::max()))
      ->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Fold shuffle seed")->capture_default_str();
  run_cmd->add_flag("--snap", run.snap, "Snap prototypes to their nearest training instance");
  run_cmd->add_option("--label-column", run.label_column, "Header name, 0-based index or 'last'")
      ->capture_default_str();
  run_cmd->add_option("--output,-o", run.output, "Report file (default stdout)");
  run_cmd->add_option("--format", run.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  run_cmd->add_flag("--normalize", run.normalize, "Min-max scale features before splitting");
  run_cmd->add_option("--jobs", run.jobs, "Parallel folds (0 = PROTOSELECT_JOBS or all cores)");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark grid and write CSV tables");
  bench_cmd->add_option("grid", bench.grid, "Grid JSON file")->required()->check(CLI::ExistingFile);
  bench_cmd->add_option("--out-dir", bench.out_dir, "Directory for the tables")
      ->capture_default_str();
  bench_cmd->add_option("--jobs", bench.jobs, "Concurrent cells (0 = PROTOSELECT_JOBS or all cores)");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic Gaussian-blob dataset");
  gen_cmd->add_option("--size", gen.spec.size)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--classes", gen.spec.classes)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  gen_cmd->add_option("--dims", gen.spec.dims)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--spread", gen.spec.spread)->check(CLI::NonNegativeNumber)->capture_default_str();
  gen_cmd->add_option("--extent", gen.spec.extent)->check(CLI::PositiveNumber)->capture_default_str();
  gen_cmd->add_option("--seed", gen.spec.seed)->capture_default_str();
  gen_cmd->add_option("--output,-o", gen.output, "CSV file (default stdout)");

  PartitionFlags part;
  auto* part_cmd = app.add_subcommand("partition", "Dump the grid partition of a dataset as JSON");
  part_cmd->add_option("--data", part.data)->required();
  part_cmd->add_option("--n", part.n)->check(CLI::PositiveNumber)->capture_default_str();
  part_cmd->add_option("--label-column", part.label_column)->capture_default_str();
  part_cmd->add_option("--output,-o", part.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*run_cmd) return cmd_run(run, out, err);
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*part_cmd) return cmd_partition(part, out);
    if (*bench_cmd) {
      return run_bench(bench.grid, bench.out_dir, bench.jobs == 0 ? default_jobs() : bench.jobs,
                       err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}

}  // namespace protoselect::cli
