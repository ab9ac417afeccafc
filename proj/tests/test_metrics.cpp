#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "helpers.hpp"
#include "imvb7/metrics.hpp"
#include "imvb7/util.hpp"

using namespace imvb7;

namespace {

using Names = std::vector<std::string>;

// Textbook per-class computation, independent of the library's sorted-order
// aggregation: average one-vs-rest precision/recall over the given classes.
void oracle_macro(const Names& y_true, const Names& y_pred, const Names& labels, double& precision,
                  double& recall) {
  double p_sum = 0.0;
  double r_sum = 0.0;
  Names order = labels;
  std::sort(order.begin(), order.end());
  for (const auto& cls : order) {
    std::uint64_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
      if (y_pred[i] == cls && y_true[i] == cls) ++tp;
      if (y_pred[i] == cls && y_true[i] != cls) ++fp;
      if (y_pred[i] != cls && y_true[i] == cls) ++fn;
    }
    p_sum += tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    r_sum += tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  }
  precision = p_sum / static_cast<double>(labels.size());
  recall = r_sum / static_cast<double>(labels.size());
}

const Names kAbc = {"a", "b", "c"};

} // namespace

TEST_CASE("confusion matrix layout") {
  const Names y_true = {"a", "a", "b", "b", "c"};
  const Names y_pred = {"a", "b", "b", "b", "c"};
  const ConfusionMatrix cm = confusion(y_true, y_pred, kAbc);
  CHECK(cm.labels == kAbc);
  REQUIRE(cm.counts.size() == 3);
  CHECK(cm.counts[0] == std::vector<std::uint64_t>{1, 1, 0});
  CHECK(cm.counts[1] == std::vector<std::uint64_t>{0, 2, 0});
  CHECK(cm.counts[2] == std::vector<std::uint64_t>{0, 0, 1});
  CHECK(cm.total() == 5);
}

TEST_CASE("confusion with no samples is a zero matrix") {
  const ConfusionMatrix cm = confusion({}, {}, kAbc);
  CHECK(cm.total() == 0);
  for (const auto& row : cm.counts) {
    for (auto c : row) CHECK(c == 0);
  }
}

TEST_CASE("confusion input validation") {
  CHECK_CODE(confusion({"a"}, {"a", "b"}, kAbc), ErrorCode::LengthMismatch);
  CHECK_CODE(confusion({"a"}, {"a"}, {"a", "a"}), ErrorCode::InvalidConfig);
  CHECK_CODE(confusion({"z"}, {"a"}, kAbc), ErrorCode::UnknownLabel);
  CHECK_CODE(confusion({"a"}, {"z"}, kAbc), ErrorCode::UnknownLabel);
}

TEST_CASE("accuracy") {
  CHECK(accuracy(confusion({"a", "b"}, {"a", "b"}, kAbc)) == 1.0);
  CHECK(accuracy(confusion({"a", "a", "a", "a", "b"}, {"a", "a", "a", "a", "a"}, kAbc)) == 0.8);
  CHECK(accuracy(confusion({"a", "b"}, {"b", "a"}, kAbc)) == 0.0);
  CHECK_CODE(accuracy(confusion({}, {}, kAbc)), ErrorCode::EmptyEvaluationSet);
}

TEST_CASE("macro precision and recall on the worked five-sample set") {
  const Names y_true = {"a", "a", "b", "b", "c"};
  const Names y_pred = {"a", "b", "b", "b", "c"};
  const ConfusionMatrix cm = confusion(y_true, y_pred, kAbc);
  // Per class: precision 1, 2/3, 1; recall 1/2, 1, 1.
  CHECK(macro_precision(cm) == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(macro_recall(cm) == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("classes never predicted or never present contribute zero") {
  // "c" is in the label set but absent from both vectors: its precision and
  // recall terms are 0/0 and enter the mean as 0.
  const ConfusionMatrix cm = confusion({"a", "b"}, {"a", "b"}, kAbc);
  CHECK(macro_precision(cm) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(macro_recall(cm) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("f_score") {
  CHECK(f_score(1.0, 1.0, 1.0) == 1.0);
  const double p = 8.0 / 9.0;
  const double r = 5.0 / 6.0;
  CHECK(f_score(p, r, 1.0) == doctest::Approx(2.0 * p * r / (p + r)).epsilon(1e-15));
  CHECK(f_score(0.0, 0.0, 1.0) == 0.0);
  CHECK(f_score(0.5, 0.5, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_CODE(f_score(0.5, 0.5, 0.0), ErrorCode::InvalidBeta);
  CHECK_CODE(f_score(0.5, 0.5, -1.0), ErrorCode::InvalidBeta);
}

TEST_CASE("evaluate composes the individual metrics") {
  const Names y_true = {"a", "a", "b", "b", "c"};
  const Names y_pred = {"a", "b", "b", "b", "c"};
  const MetricReport report = evaluate(y_true, y_pred, kAbc);
  CHECK(report.accuracy == 0.8);
  CHECK(report.macro_precision == doctest::Approx(8.0 / 9.0).epsilon(1e-15));
  CHECK(report.macro_recall == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
  CHECK(report.f_score ==
        f_score(report.macro_precision, report.macro_recall, 1.0));
  CHECK(report.beta == 1.0);
}

TEST_CASE("evaluate matches a brute-force oracle on random instances") {
  DeterministicRng rng(99);
  const Names alphabet = {"p", "q", "r", "s"};
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 1 + rng.below(60);
    Names y_true, y_pred;
    for (std::size_t i = 0; i < n; ++i) {
      y_true.push_back(alphabet[rng.below(alphabet.size())]);
      y_pred.push_back(alphabet[rng.below(alphabet.size())]);
    }
    const MetricReport report = evaluate(y_true, y_pred, alphabet);
    double p = 0.0, r = 0.0;
    oracle_macro(y_true, y_pred, alphabet, p, r);
    CHECK(report.macro_precision == doctest::Approx(p).epsilon(1e-12));
    CHECK(report.macro_recall == doctest::Approx(r).epsilon(1e-12));
    std::uint64_t hits = 0;
    for (std::size_t i = 0; i < n; ++i) hits += y_true[i] == y_pred[i] ? 1 : 0;
    CHECK(report.accuracy == static_cast<double>(hits) / static_cast<double>(n));
  }
}

TEST_CASE("metrics are exactly invariant to label-set order") {
  DeterministicRng rng(7);
  const Names shuffled = {"r", "p", "s", "q"};
  const Names sorted_set = {"p", "q", "r", "s"};
  for (int trial = 0; trial < 10; ++trial) {
    Names y_true, y_pred;
    for (int i = 0; i < 30; ++i) {
      y_true.push_back(sorted_set[rng.below(4)]);
      y_pred.push_back(sorted_set[rng.below(4)]);
    }
    const MetricReport a = evaluate(y_true, y_pred, sorted_set);
    const MetricReport b = evaluate(y_true, y_pred, shuffled);
    CHECK(a.macro_precision == b.macro_precision);
    CHECK(a.macro_recall == b.macro_recall);
    CHECK(a.f_score == b.f_score);
    CHECK(a.accuracy == b.accuracy);
  }
}

TEST_CASE("evaluate validation") {
  CHECK_CODE(evaluate({}, {}, kAbc), ErrorCode::EmptyEvaluationSet);
  CHECK_CODE(evaluate({"a"}, {"a"}, kAbc, 0.0), ErrorCode::InvalidBeta);
}

TEST_CASE("report_to_json carries every field") {
  MetricReport report;
  report.accuracy = 0.8;
  report.macro_precision = 0.75;
  report.macro_recall = 0.5;
  report.f_score = 0.6;
  report.beta = 2.0;
  const auto parsed = nlohmann::json::parse(report_to_json(report));
  CHECK(parsed.at("accuracy").get<double>() == 0.8);
  CHECK(parsed.at("macro_precision").get<double>() == 0.75);
  CHECK(parsed.at("macro_recall").get<double>() == 0.5);
  CHECK(parsed.at("f_score").get<double>() == 0.6);
  CHECK(parsed.at("beta").get<double>() == 2.0);
}
