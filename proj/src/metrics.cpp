#include "imvb7/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "imvb7/errors.hpp"

namespace imvb7 {

namespace {

// Class indices visited in sorted label order, for order-invariant sums.
std::vector<std::size_t> sorted_class_order(const ConfusionMatrix& cm) {
  std::vector<std::size_t> order(cm.labels.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cm.labels[a] < cm.labels[b]; });
  return order;
}

double macro_mean(const ConfusionMatrix& cm, bool by_column) {
  if (cm.total() == 0) raise(ErrorCode::EmptyEvaluationSet, "confusion matrix is empty");
  const std::size_t n = cm.labels.size();
  double sum = 0.0;
  for (std::size_t i : sorted_class_order(cm)) {
    const std::uint64_t tp = cm.counts[i][i];
    std::uint64_t denominator = 0;
    for (std::size_t j = 0; j < n; ++j) {
      denominator += by_column ? cm.counts[j][i] : cm.counts[i][j];
    }
    if (denominator > 0) {
      sum += static_cast<double>(tp) / static_cast<double>(denominator);
    }
  }
  return sum / static_cast<double>(n);
}

} // namespace

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t sum = 0;
  for (const auto& row : counts) {
    for (std::uint64_t c : row) sum += c;
  }
  return sum;
}

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& labels) {
  if (y_true.size() != y_pred.size()) {
    raise(ErrorCode::LengthMismatch, std::to_string(y_true.size()) + " true labels vs " +
                                         std::to_string(y_pred.size()) + " predictions");
  }
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!index.emplace(labels[i], i).second) {
      raise(ErrorCode::InvalidConfig, "class set repeats label '" + labels[i] + "'");
    }
  }
  ConfusionMatrix cm;
  cm.labels = labels;
  cm.counts.assign(labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const auto t = index.find(y_true[i]);
    const auto p = index.find(y_pred[i]);
    if (t == index.end()) raise(ErrorCode::UnknownLabel, "true label '" + y_true[i] + "'");
    if (p == index.end()) raise(ErrorCode::UnknownLabel, "predicted label '" + y_pred[i] + "'");
    cm.counts[t->second][p->second] += 1;
  }
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) raise(ErrorCode::EmptyEvaluationSet, "confusion matrix is empty");
  std::uint64_t trace = 0;
  for (std::size_t i = 0; i < cm.labels.size(); ++i) trace += cm.counts[i][i];
  return static_cast<double>(trace) / static_cast<double>(total);
}

double macro_precision(const ConfusionMatrix& cm) { return macro_mean(cm, /*by_column=*/true); }

double macro_recall(const ConfusionMatrix& cm) { return macro_mean(cm, /*by_column=*/false); }

double f_score(double precision, double recall, double beta) {
  if (!(beta > 0.0)) raise(ErrorCode::InvalidBeta, "beta must be positive");
  const double b2 = beta * beta;
  const double denominator = b2 * precision + recall;
  if (denominator == 0.0) return 0.0;
  return (b2 + 1.0) * precision * recall / denominator;
}

MetricReport evaluate(const std::vector<std::string>& y_true,
                      const std::vector<std::string>& y_pred,
                      const std::vector<std::string>& labels, double beta) {
  const ConfusionMatrix cm = confusion(y_true, y_pred, labels);
  MetricReport report;
  report.beta = beta;
  report.accuracy = accuracy(cm);
  report.macro_precision = macro_precision(cm);
  report.macro_recall = macro_recall(cm);
  report.f_score = f_score(report.macro_precision, report.macro_recall, beta);
  return report;
}

std::string report_to_json(const MetricReport& report) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = report.accuracy;
  doc["macro_precision"] = report.macro_precision;
  doc["macro_recall"] = report.macro_recall;
  doc["f_score"] = report.f_score;
  doc["beta"] = report.beta;
  return doc.dump(2) + "\n";
}

} // namespace imvb7
