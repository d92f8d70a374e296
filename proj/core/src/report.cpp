#include <cstdio>
#include <string>

#include <json.hpp>

#include "protoselect/evaluation.hpp"

namespace protoselect {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

std::string report_to_json(const EvaluationReport& report, int indent) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["dataset"] = report.dataset;
  doc["algorithm"] = report.config.algorithm_label();
  json cfg;
  cfg["selector"] = std::string(selector_name(report.config.selector));
  cfg["fast"] = report.config.use_psasa;
  cfg["n"] = report.config.n;
  cfg["k"] = report.config.k;
  cfg["snap"] = report.config.snap;
  doc["config"] = std::move(cfg);
  doc["folds"] = report.n_folds;
  doc["seed"] = report.seed;
  doc["mean_accuracy"] = report.mean_accuracy;
  doc["mean_reduction"] = report.mean_reduction;
  doc["mean_total_time"] = report.mean_total_time;
  json folds = json::array();
  for (const auto& fr : report.per_fold) {
    json f;
    f["fold"] = fr.fold;
    f["accuracy"] = fr.accuracy;
    f["reduction"] = fr.reduction;
    f["train_size"] = fr.train_size;
    f["test_size"] = fr.test_size;
    f["candidate_size"] = fr.candidate_size;
    f["reduced_size"] = fr.reduced_size;
    f["flagged"] = fr.flagged;
    f["psasa_time"] = fr.psasa_seconds;
    f["selector_time"] = fr.selector_seconds;
    if (!fr.warning.empty()) f["warning"] = fr.warning;
    folds.push_back(std::move(f));
  }
  doc["per_fold"] = std::move(folds);
  doc["warnings"] = report.warnings;
  return doc.dump(indent);
}

std::string report_csv_header() {
  return "dataset,algorithm,selector,fast,n,k,folds,seed,snap,mean_accuracy,"
         "mean_reduction,mean_psasa_time,mean_selector_time,mean_total_time";
}

std::string report_csv_row(const EvaluationReport& report) {
  double psasa = 0.0, selector = 0.0;
  for (const auto& fr : report.per_fold) {
    psasa += fr.psasa_seconds;
    selector += fr.selector_seconds;
  }
  const double nf = report.per_fold.empty() ? 1.0 : static_cast<double>(report.per_fold.size());
  const auto& c = report.config;
  std::string row;
  row += report.dataset + ',' + c.algorithm_label() + ',' + std::string(selector_name(c.selector));
  row += ',' + std::string(c.use_psasa ? "1" : "0");
  row += ',' + std::to_string(c.n) + ',' + std::to_string(c.k);
  row += ',' + std::to_string(report.n_folds) + ',' + std::to_string(report.seed);
  row += ',' + std::string(c.snap ? "1" : "0");
  row += ',' + fixed(report.mean_accuracy, 6) + ',' + fixed(report.mean_reduction, 6);
  row += ',' + fixed(psasa / nf, 6) + ',' + fixed(selector / nf, 6) + ',' +
         fixed(report.mean_total_time, 6);
  return row;
}

}  // namespace protoselect
