#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "protoselect/dataset.hpp"
#include "protoselect/pipeline.hpp"

namespace protoselect {

/// Majority label of the k nearest model points (all of them when the model
/// is smaller than k). Distance ties go to the lower id; vote ties to the
/// class of the nearest tied neighbor. Throws on an empty model.
Label knn_classify(const Dataset& model, std::span<const double> query, std::size_t k);

/// Fraction of `test` that knn_classify labels correctly.
double accuracy(const Dataset& model, const Dataset& test, std::size_t k);

/// (original - reduced) / original.
double reduction(std::size_t original_size, std::size_t reduced_size);

struct FoldResult {
  std::size_t fold = 0;
  double accuracy = 0.0;
  double reduction = 0.0;
  double psasa_seconds = 0.0;
  double selector_seconds = 0.0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t candidate_size = 0;
  std::size_t reduced_size = 0;
  /// Set when the pipeline produced nothing; accuracy is then 0.
  bool flagged = false;
  std::string warning;
};

struct EvaluationReport {
  std::string dataset;
  PipelineConfig config;
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<FoldResult> per_fold;
  double mean_accuracy = 0.0;
  double mean_reduction = 0.0;
  double mean_total_time = 0.0;
  std::vector<std::string> warnings;
};

/// Stratified cross-validation of one pipeline configuration. Folds may run
/// on up to `jobs` workers; per_fold stays ordered by fold index.
EvaluationReport run_experiment(const Dataset& ds, const PipelineConfig& cfg,
                                std::size_t n_folds, std::uint64_t seed,
                                std::size_t jobs = 1);

/// JSON with a fixed field order. Wall-time fields are confined to
/// "psasa_time", "selector_time" and "mean_total_time".
std::string report_to_json(const EvaluationReport& report, int indent = 2);

std::string report_csv_header();
std::string report_csv_row(const EvaluationReport& report);

}  // namespace protoselect
