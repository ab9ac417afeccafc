#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace imvb7 {

// CART training knobs. An absent max_depth means unbounded recursion.
struct TreeConfig {
  std::optional<int> max_depth;
  int min_samples_split = 2;
};

// A node is internal when both children are set (route x left iff
// x[feature_index] <= threshold) and a leaf otherwise.  Leaves carry the
// class-count histogram of their training subset, indexed like the model's
// label_set, plus the precomputed majority label.
struct TreeNode {
  int feature_index = -1;
  double threshold = 0.0;
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  std::string label;
  std::vector<std::uint64_t> class_counts;

  bool is_leaf() const { return left == nullptr; }
};

struct DecisionTreeModel {
  std::unique_ptr<TreeNode> root;
  std::size_t feature_count = 0;
  std::vector<std::string> label_set; // sorted, distinct
};

bool operator==(const DecisionTreeModel& a, const DecisionTreeModel& b);
inline bool operator!=(const DecisionTreeModel& a, const DecisionTreeModel& b) {
  return !(a == b);
}

// Gini impurity 1 - sum of squared class fractions.
double gini(const std::vector<std::string>& labels);

// Greedy CART fit.  Candidate thresholds are midpoints between consecutive
// sorted distinct values per feature; recursion stops at pure nodes,
// max_depth, min_samples_split, or when no split yields positive gain.
// Tie-breaks: equal gain -> lower feature index, then lower threshold;
// equal leaf counts -> lexicographically smaller label.
DecisionTreeModel fit(const std::vector<std::vector<double>>& features,
                      const std::vector<std::string>& labels, const TreeConfig& config);

// Root-to-leaf descent; returns the leaf's majority label.
std::string predict(const DecisionTreeModel& model, const std::vector<double>& x);

// Canonical text rendering: a `tree` header naming feature count and label
// set, then one line per node (`node <feature> <= <threshold>` or
// `leaf <label> <counts...>`), children indented two spaces per level, left
// subtree first.  Labels must be free of whitespace to stay parseable.
std::string export_text(const DecisionTreeModel& model);

// Inverse of export_text; raises ParseError on malformed input.
DecisionTreeModel import_text(const std::string& text);

} // namespace imvb7
