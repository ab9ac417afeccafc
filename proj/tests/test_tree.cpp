#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "imvb7/tree.hpp"
#include "imvb7/util.hpp"

using namespace imvb7;

namespace {

using Matrix = std::vector<std::vector<double>>;
using Labels = std::vector<std::string>;

// Random conflict-free dataset: the label is a pure function of the features.
void make_separable(DeterministicRng& rng, std::size_t n, std::size_t d, Matrix& x, Labels& y) {
  x.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(d);
    for (auto& v : row) v = static_cast<double>(rng.below(8));
    const double key = row[0] + (d > 1 ? 2.0 * row[1] : 0.0);
    x.push_back(std::move(row));
    y.push_back(key < 6.0 ? "a" : key < 11.0 ? "b" : "c");
  }
}

} // namespace

TEST_CASE("gini impurity") {
  CHECK(gini({"a", "a", "a"}) == 0.0);
  CHECK(gini({"a", "a", "b", "b"}) == 0.5);
  CHECK(gini({"a", "a", "a", "b"}) == 0.375);
  CHECK_CODE(gini({}), ErrorCode::EmptyLabelSet);
}

TEST_CASE("single example trains to a constant leaf") {
  const DecisionTreeModel model = fit({{3.0, 1.0}}, {"Pizza"}, {});
  REQUIRE(model.root != nullptr);
  CHECK(model.root->is_leaf());
  CHECK(model.feature_count == 2);
  CHECK(model.label_set == Labels{"Pizza"});
  CHECK(predict(model, {0.0, 0.0}) == "Pizza");
  CHECK(predict(model, {100.0, -5.0}) == "Pizza");
}

TEST_CASE("two separable points split at the midpoint") {
  const DecisionTreeModel model = fit({{0.0}, {1.0}}, {"a", "b"}, {});
  REQUIRE_FALSE(model.root->is_leaf());
  CHECK(model.root->feature_index == 0);
  CHECK(model.root->threshold == 0.5);
  CHECK(predict(model, {0.2}) == "a");
  CHECK(predict(model, {0.5}) == "a"); // boundary routes left
  CHECK(predict(model, {0.7}) == "b");
}

TEST_CASE("conflict-free data is memorized exactly") {
  DeterministicRng rng(41);
  Matrix x;
  Labels y;
  make_separable(rng, 120, 3, x, y);
  const DecisionTreeModel model = fit(x, y, {});
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(predict(model, x[i]) == y[i]);
}

TEST_CASE("fit input validation") {
  CHECK_CODE(fit({{1.0}}, {"a", "b"}, {}), ErrorCode::ShapeMismatch);
  CHECK_CODE(fit({{1.0}, {2.0, 3.0}}, {"a", "b"}, {}), ErrorCode::ShapeMismatch);
  CHECK_CODE(fit({}, {}, {}), ErrorCode::EmptyTrainingSet);
  TreeConfig narrow;
  narrow.min_samples_split = 1;
  CHECK_CODE(fit({{1.0}}, {"a"}, narrow), ErrorCode::InvalidConfig);
  TreeConfig flat;
  flat.max_depth = 0;
  CHECK_CODE(fit({{1.0}}, {"a"}, flat), ErrorCode::InvalidConfig);
}

TEST_CASE("predict validates the probe dimension") {
  const DecisionTreeModel model = fit({{0.0, 0.0}, {1.0, 1.0}}, {"a", "b"}, {});
  CHECK_CODE(predict(model, {1.0}), ErrorCode::DimensionMismatch);
  CHECK_CODE(predict(model, {1.0, 2.0, 3.0}), ErrorCode::DimensionMismatch);
}

TEST_CASE("equal-gain ties pick the lower feature index") {
  // Second column duplicates the first, so every split it offers ties one
  // already seen on column 0.
  const Matrix x = {{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}, {3.0, 3.0}};
  const DecisionTreeModel model = fit(x, {"a", "a", "b", "b"}, {});
  REQUIRE_FALSE(model.root->is_leaf());
  CHECK(model.root->feature_index == 0);
  CHECK(model.root->threshold == 1.5);
}

TEST_CASE("equal-gain ties pick the lower threshold") {
  // Splitting at 0.5 or 1.5 yields the same weighted impurity (child sets
  // {a} | {b,a} versus {a,b} | {a}); the scan keeps the first.
  const DecisionTreeModel model = fit({{0.0}, {1.0}, {2.0}}, {"a", "b", "a"}, {});
  REQUIRE_FALSE(model.root->is_leaf());
  CHECK(model.root->threshold == 0.5);
}

TEST_CASE("leaf majority ties resolve to the lexicographically smaller label") {
  const DecisionTreeModel model = fit({{1.0}, {1.0}}, {"b", "a"}, {});
  REQUIRE(model.root->is_leaf());
  CHECK(model.root->label == "a");
  CHECK(model.root->class_counts == std::vector<std::uint64_t>{1, 1});
}

TEST_CASE("max_depth bounds the tree") {
  DeterministicRng rng(5);
  Matrix x;
  Labels y;
  make_separable(rng, 60, 2, x, y);
  TreeConfig config;
  config.max_depth = 1;
  const DecisionTreeModel stump = fit(x, y, config);
  REQUIRE_FALSE(stump.root->is_leaf());
  CHECK(stump.root->left->is_leaf());
  CHECK(stump.root->right->is_leaf());
}

TEST_CASE("min_samples_split stops expansion") {
  TreeConfig config;
  config.min_samples_split = 5;
  const DecisionTreeModel model = fit({{0.0}, {1.0}, {2.0}, {3.0}}, {"a", "a", "b", "b"}, config);
  REQUIRE(model.root->is_leaf());
  CHECK(model.root->label == "a");
}

TEST_CASE("impure nodes with no positive-gain split become leaves") {
  // Identical feature rows with mixed labels cannot be separated.
  const DecisionTreeModel model =
      fit({{2.0}, {2.0}, {2.0}}, {"b", "b", "a"}, {});
  REQUIRE(model.root->is_leaf());
  CHECK(model.root->label == "b");
}

TEST_CASE("one-hot features always split at one half") {
  DeterministicRng rng(19);
  Matrix x;
  Labels y;
  for (int i = 0; i < 40; ++i) {
    const std::uint64_t bits = rng.below(8);
    x.push_back({static_cast<double>(bits & 1), static_cast<double>((bits >> 1) & 1),
                 static_cast<double>((bits >> 2) & 1)});
    y.push_back((bits & 1) ? "x" : ((bits >> 1) & 1 ? "y" : "z"));
  }
  const DecisionTreeModel model = fit(x, y, {});
  std::vector<const TreeNode*> stack = {model.root.get()};
  while (!stack.empty()) {
    const TreeNode* node = stack.back();
    stack.pop_back();
    if (node->is_leaf()) continue;
    CHECK(node->threshold == 0.5);
    stack.push_back(node->left.get());
    stack.push_back(node->right.get());
  }
}

TEST_CASE("export_text renders a single leaf") {
  const DecisionTreeModel model = fit({{1.0}}, {"Fish"}, {});
  CHECK(export_text(model) == "tree 1 1 Fish\nleaf Fish 1\n");
}

TEST_CASE("export_text renders a stump with indented children") {
  const DecisionTreeModel model = fit({{0.0}, {1.0}}, {"a", "b"}, {});
  CHECK(export_text(model) == "tree 1 2 a b\nnode 0 <= 0.5\n  leaf a 1 0\n  leaf b 0 1\n");
}

TEST_CASE("text round trip preserves models byte for byte") {
  DeterministicRng rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix x;
    Labels y;
    make_separable(rng, 10 + rng.below(80), 1 + rng.below(4), x, y);
    const DecisionTreeModel model = fit(x, y, {});
    const std::string text = export_text(model);
    const DecisionTreeModel loaded = import_text(text);
    CHECK(loaded == model);
    CHECK(export_text(loaded) == text);
  }
}

TEST_CASE("import_text rejects malformed documents") {
  CHECK_CODE(import_text(""), ErrorCode::ParseError);
  CHECK_CODE(import_text("forest 1 1 a\nleaf a 1\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\n  leaf a 1\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\nleaf b 1\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 2 b a\nleaf a 1 0\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\nnode 3 <= 0.5\n  leaf a 1\n  leaf a 1\n"),
             ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\nleaf a 1\nleaf a 1\n"), ErrorCode::ParseError);
  CHECK_CODE(import_text("tree 1 1 a\nnode 0 <= nope\n  leaf a 1\n  leaf a 1\n"),
             ErrorCode::ParseError);
}

TEST_CASE("whitespace in labels cannot be exported") {
  DecisionTreeModel model = fit({{1.0}}, {"ok"}, {});
  model.label_set[0] = "not ok";
  model.root->label = "not ok";
  CHECK_CODE(export_text(model), ErrorCode::InvalidConfig);
}
