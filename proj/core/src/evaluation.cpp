#include "protoselect/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "protoselect/neighbors.hpp"

namespace protoselect {

Label knn_classify(const Dataset& model, std::span<const double> query, std::size_t k) {
  if (model.empty()) throw std::invalid_argument("knn_classify: empty model");
  if (query.size() != model.dim()) {
    throw std::invalid_argument("knn_classify: dimension mismatch");
  }
  if (k == 0) throw std::invalid_argument("knn_classify: k must be at least 1");
  const std::size_t take = std::min(k, model.size());
  std::vector<RankedRow> best;
  best.reserve(take + 1);
  for (std::size_t r = 0; r < model.size(); ++r) {
    const double d2 = squared_distance(query.data(), model.values(r).data(), model.dim());
    insert_ranked(best, take, {d2, model.id(r), r});
  }
  std::vector<std::size_t> rows;
  rows.reserve(best.size());
  for (const auto& e : best) rows.push_back(e.row);
  return majority_vote(model, rows);
}

double accuracy(const Dataset& model, const Dataset& test, std::size_t k) {
  if (test.empty()) throw std::invalid_argument("accuracy: empty test set");
  std::size_t hits = 0;
  for (std::size_t r = 0; r < test.size(); ++r) {
    if (knn_classify(model, test.values(r), k) == test.label(r)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

double reduction(std::size_t original_size, std::size_t reduced_size) {
  if (original_size == 0) throw std::invalid_argument("reduction: original size is zero");
  if (reduced_size > original_size) {
    throw std::invalid_argument("reduction: reduced size exceeds original size");
  }
  return static_cast<double>(original_size - reduced_size) /
         static_cast<double>(original_size);
}

namespace {

FoldResult run_fold(const Dataset& ds, const FoldAssignment& folds, std::size_t fold,
                    const PipelineConfig& cfg) {
  const auto train_rows = folds.train_rows(fold);
  const auto test_rows = folds.test_rows(fold);
  const Dataset train = ds.subset(train_rows);
  const Dataset test = ds.subset(test_rows);

  // The pipeline must never see a held-out instance.
  std::vector<InstanceId> a(train.id_column().begin(), train.id_column().end());
  std::vector<InstanceId> b(test.id_column().begin(), test.id_column().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<InstanceId> shared;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(shared));
  if (!shared.empty()) throw std::logic_error("train and test folds overlap");

  FoldResult fr;
  fr.fold = fold;
  fr.train_size = train.size();
  fr.test_size = test.size();
  const PipelineResult pr = run_pipeline(train, cfg);
  fr.candidate_size = pr.candidate_count;
  fr.reduced_size = pr.reduced.size();
  fr.psasa_seconds = pr.timing.psasa.count();
  fr.selector_seconds = pr.timing.selector.count();
  fr.warning = pr.warning;
  fr.reduction = reduction(train.size(), pr.reduced.size());
  if (pr.reduced.empty()) {
    fr.flagged = true;
    fr.accuracy = 0.0;
  } else {
    fr.accuracy = accuracy(pr.reduced, test, cfg.k);
  }
  return fr;
}

}  // namespace

EvaluationReport run_experiment(const Dataset& ds, const PipelineConfig& cfg,
                                std::size_t n_folds, std::uint64_t seed, std::size_t jobs) {
  cfg.validate();
  if (ds.empty()) throw std::invalid_argument("run_experiment: empty dataset");
  const FoldAssignment folds = stratified_folds(ds, n_folds, seed);

  EvaluationReport report;
  report.dataset = ds.name();
  report.config = cfg;
  report.n_folds = n_folds;
  report.seed = seed;
  report.per_fold.resize(n_folds);

  {
    std::vector<std::size_t> per_class(ds.label_names().size(), 0);
    for (std::size_t r = 0; r < ds.size(); ++r) ++per_class[ds.label(r)];
    for (Label l = 0; l < per_class.size(); ++l) {
      if (per_class[l] > 0 && per_class[l] < n_folds) {
        report.warnings.push_back("class '" + ds.label_name(l) + "' has only " +
                                  std::to_string(per_class[l]) +
                                  " instances; stratification is best effort");
      }
    }
  }

  jobs = std::clamp<std::size_t>(jobs, 1, n_folds);
  if (jobs == 1) {
    for (std::size_t f = 0; f < n_folds; ++f) report.per_fold[f] = run_fold(ds, folds, f, cfg);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(n_folds);
    {
      std::vector<std::jthread> workers;
      for (std::size_t w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
          for (std::size_t f = next++; f < n_folds; f = next++) {
            try {
              report.per_fold[f] = run_fold(ds, folds, f, cfg);
            } catch (...) {
              errors[f] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  double acc = 0.0, red = 0.0, time = 0.0;
  for (const auto& fr : report.per_fold) {
    acc += fr.accuracy;
    red += fr.reduction;
    time += fr.psasa_seconds + fr.selector_seconds;
    if (fr.flagged) {
      report.warnings.push_back("fold " + std::to_string(fr.fold) +
                                " produced an empty reduced set");
    }
  }
  const double nf = static_cast<double>(n_folds);
  report.mean_accuracy = acc / nf;
  report.mean_reduction = red / nf;
  report.mean_total_time = time / nf;
  return report;
}

}  // namespace protoselect
