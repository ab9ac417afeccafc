#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace imvb7 {

// Rows are true classes, columns are predicted classes, both in label order.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t total() const;
};

struct MetricReport {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double f_score = 0.0;
  double beta = 1.0;
};

ConfusionMatrix confusion(const std::vector<std::string>& y_true,
                          const std::vector<std::string>& y_pred,
                          const std::vector<std::string>& labels);

// Fraction of the total count on the diagonal.
double accuracy(const ConfusionMatrix& cm);

// Equal-weight mean of per-class TP/(TP+FP); zero-denominator classes
// contribute 0.  Summation runs in sorted label order so relabelings and
// reorderings of the class set cannot perturb the result.
double macro_precision(const ConfusionMatrix& cm);

// Equal-weight mean of per-class TP/(TP+FN); same conventions as precision.
double macro_recall(const ConfusionMatrix& cm);

// (beta^2 + 1) * P * R / (beta^2 * P + R), or 0 when the denominator is 0.
double f_score(double precision, double recall, double beta);

MetricReport evaluate(const std::vector<std::string>& y_true,
                      const std::vector<std::string>& y_pred,
                      const std::vector<std::string>& labels, double beta = 1.0);

// Flat JSON object {accuracy, macro_precision, macro_recall, f_score, beta}.
std::string report_to_json(const MetricReport& report);

} // namespace imvb7
