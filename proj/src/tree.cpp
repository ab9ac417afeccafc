#include "imvb7/tree.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "imvb7/errors.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

namespace {

double gini_from_counts(const std::vector<std::uint64_t>& counts, std::uint64_t total) {
  double sum = 0.0;
  for (std::uint64_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

struct FitContext {
  const std::vector<std::vector<double>>& features;
  std::vector<std::size_t> label_ids; // per training row, index into label_set
  std::size_t n_labels = 0;
  std::size_t dimensions = 0;
  TreeConfig config;
  std::vector<std::string> label_set;
};

std::unique_ptr<TreeNode> make_leaf(const FitContext& ctx,
                                    const std::vector<std::uint64_t>& counts) {
  auto leaf = std::make_unique<TreeNode>();
  leaf->class_counts = counts;
  // First maximum wins: label_set is sorted, so count ties resolve to the
  // lexicographically smaller label.
  std::size_t majority = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[majority]) majority = c;
  }
  leaf->label = ctx.label_set[majority];
  return leaf;
}

std::unique_ptr<TreeNode> build(const FitContext& ctx, const std::vector<std::size_t>& members,
                                int depth) {
  std::vector<std::uint64_t> counts(ctx.n_labels, 0);
  for (std::size_t i : members) counts[ctx.label_ids[i]] += 1;
  std::size_t present = 0;
  for (std::uint64_t c : counts) present += c > 0 ? 1 : 0;

  const bool depth_capped = ctx.config.max_depth && depth >= *ctx.config.max_depth;
  if (present <= 1 || depth_capped ||
      members.size() < static_cast<std::size_t>(ctx.config.min_samples_split)) {
    return make_leaf(ctx, counts);
  }

  const auto n = static_cast<std::uint64_t>(members.size());
  const double parent_impurity = gini_from_counts(counts, n);

  // Scan features ascending and thresholds ascending, keeping the first
  // strictly best gain, which realizes the documented tie-breaks.
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  std::vector<std::size_t> order(members);
  std::vector<std::uint64_t> left_counts(ctx.n_labels);
  for (std::size_t f = 0; f < ctx.dimensions; ++f) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ctx.features[a][f] < ctx.features[b][f];
    });
    std::fill(left_counts.begin(), left_counts.end(), 0);
    for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
      left_counts[ctx.label_ids[order[pos]]] += 1;
      const double lo = ctx.features[order[pos]][f];
      const double hi = ctx.features[order[pos + 1]][f];
      if (lo == hi) continue;
      const double threshold = lo + (hi - lo) / 2.0;
      const auto n_left = static_cast<std::uint64_t>(pos + 1);
      const auto n_right = n - n_left;
      double left_impurity = 0.0;
      double right_impurity = 0.0;
      {
        double left_sum = 0.0;
        double right_sum = 0.0;
        for (std::size_t c = 0; c < ctx.n_labels; ++c) {
          const double pl = static_cast<double>(left_counts[c]) / static_cast<double>(n_left);
          const double pr =
              static_cast<double>(counts[c] - left_counts[c]) / static_cast<double>(n_right);
          left_sum += pl * pl;
          right_sum += pr * pr;
        }
        left_impurity = 1.0 - left_sum;
        right_impurity = 1.0 - right_sum;
      }
      const double weighted = (static_cast<double>(n_left) / static_cast<double>(n)) * left_impurity +
                              (static_cast<double>(n_right) / static_cast<double>(n)) * right_impurity;
      const double gain = parent_impurity - weighted;
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = static_cast<int>(f);
        best_threshold = threshold;
      }
    }
  }

  if (best_feature < 0) return make_leaf(ctx, counts);

  std::vector<std::size_t> left_members;
  std::vector<std::size_t> right_members;
  for (std::size_t i : members) {
    if (ctx.features[i][static_cast<std::size_t>(best_feature)] <= best_threshold) {
      left_members.push_back(i);
    } else {
      right_members.push_back(i);
    }
  }
  if (left_members.empty() || right_members.empty()) {
    raise(ErrorCode::Internal, "accepted split left a child empty");
  }

  auto node = std::make_unique<TreeNode>();
  node->feature_index = best_feature;
  node->threshold = best_threshold;
  node->left = build(ctx, left_members, depth + 1);
  node->right = build(ctx, right_members, depth + 1);
  return node;
}

bool nodes_equal(const TreeNode& a, const TreeNode& b) {
  if (a.is_leaf() != b.is_leaf()) return false;
  if (a.is_leaf()) return a.label == b.label && a.class_counts == b.class_counts;
  return a.feature_index == b.feature_index && a.threshold == b.threshold &&
         nodes_equal(*a.left, *b.left) && nodes_equal(*a.right, *b.right);
}

bool has_whitespace(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return true;
  }
  return s.empty();
}

void render_node(const TreeNode& node, int depth, std::string& out) {
  out.append(static_cast<std::size_t>(2 * depth), ' ');
  if (node.is_leaf()) {
    out += "leaf " + node.label;
    for (std::uint64_t c : node.class_counts) out += " " + std::to_string(c);
    out += "\n";
    return;
  }
  out += "node " + std::to_string(node.feature_index) + " <= " + format_double(node.threshold) +
         "\n";
  render_node(*node.left, depth + 1, out);
  render_node(*node.right, depth + 1, out);
}

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::uint64_t parse_count(const std::string& token) {
  if (token.empty()) raise(ErrorCode::ParseError, "empty count in tree text");
  for (char c : token) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      raise(ErrorCode::ParseError, "bad count '" + token + "' in tree text");
    }
  }
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(token.c_str(), &end, 10);
  if (errno != 0 || end != token.c_str() + token.size()) {
    raise(ErrorCode::ParseError, "bad count '" + token + "' in tree text");
  }
  return value;
}

double parse_threshold(const std::string& token) {
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || errno != 0 || end != token.c_str() + token.size()) {
    raise(ErrorCode::ParseError, "bad threshold '" + token + "' in tree text");
  }
  return value;
}

struct TextCursor {
  const std::vector<std::string>& lines;
  std::size_t pos = 1; // line 0 is the header
};

std::unique_ptr<TreeNode> parse_node(TextCursor& cursor, int depth,
                                     const DecisionTreeModel& model) {
  if (cursor.pos >= cursor.lines.size()) {
    raise(ErrorCode::ParseError, "tree text ends mid-subtree");
  }
  const std::string& line = cursor.lines[cursor.pos];
  const std::size_t indent = static_cast<std::size_t>(2 * depth);
  if (line.size() <= indent || line.compare(0, indent, std::string(indent, ' ')) != 0 ||
      line[indent] == ' ') {
    raise(ErrorCode::ParseError,
          "line " + std::to_string(cursor.pos + 1) + ": expected indentation depth " +
              std::to_string(depth));
  }
  cursor.pos += 1;
  const std::vector<std::string> tokens = tokenize(line.substr(indent));

  auto node = std::make_unique<TreeNode>();
  if (tokens[0] == "node") {
    if (tokens.size() != 4 || tokens[2] != "<=") {
      raise(ErrorCode::ParseError, "malformed node line '" + line + "'");
    }
    const std::uint64_t feature = parse_count(tokens[1]);
    if (feature >= model.feature_count) {
      raise(ErrorCode::ParseError, "feature index " + tokens[1] + " out of range");
    }
    node->feature_index = static_cast<int>(feature);
    node->threshold = parse_threshold(tokens[3]);
    node->left = parse_node(cursor, depth + 1, model);
    node->right = parse_node(cursor, depth + 1, model);
    return node;
  }
  if (tokens[0] == "leaf") {
    if (tokens.size() != 2 + model.label_set.size()) {
      raise(ErrorCode::ParseError, "malformed leaf line '" + line + "'");
    }
    node->label = tokens[1];
    if (std::find(model.label_set.begin(), model.label_set.end(), node->label) ==
        model.label_set.end()) {
      raise(ErrorCode::ParseError, "leaf label '" + node->label + "' is not in the label set");
    }
    for (std::size_t c = 0; c < model.label_set.size(); ++c) {
      node->class_counts.push_back(parse_count(tokens[2 + c]));
    }
    return node;
  }
  raise(ErrorCode::ParseError, "unknown tree line '" + line + "'");
}

} // namespace

bool operator==(const DecisionTreeModel& a, const DecisionTreeModel& b) {
  if (a.feature_count != b.feature_count || a.label_set != b.label_set) return false;
  if ((a.root == nullptr) != (b.root == nullptr)) return false;
  return a.root == nullptr || nodes_equal(*a.root, *b.root);
}

double gini(const std::vector<std::string>& labels) {
  if (labels.empty()) raise(ErrorCode::EmptyLabelSet, "gini needs at least one label");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& label : labels) counts[label] += 1;
  const auto n = static_cast<double>(labels.size());
  double sum = 0.0;
  for (const auto& [label, count] : counts) {
    (void)label;
    const double p = static_cast<double>(count) / n;
    sum += p * p;
  }
  return 1.0 - sum;
}

DecisionTreeModel fit(const std::vector<std::vector<double>>& features,
                      const std::vector<std::string>& labels, const TreeConfig& config) {
  if (features.size() != labels.size()) {
    raise(ErrorCode::ShapeMismatch, std::to_string(features.size()) + " feature rows vs " +
                                        std::to_string(labels.size()) + " labels");
  }
  if (features.empty()) raise(ErrorCode::EmptyTrainingSet, "cannot fit on zero examples");
  if (config.min_samples_split < 2) {
    raise(ErrorCode::InvalidConfig, "min_samples_split must be at least 2");
  }
  if (config.max_depth && *config.max_depth < 1) {
    raise(ErrorCode::InvalidConfig, "max_depth must be positive when present");
  }

  FitContext ctx{features, {}, 0, features[0].size(), config, {}};
  for (const auto& row : features) {
    if (row.size() != ctx.dimensions) {
      raise(ErrorCode::ShapeMismatch, "feature rows differ in dimensionality");
    }
  }

  ctx.label_set = labels;
  std::sort(ctx.label_set.begin(), ctx.label_set.end());
  ctx.label_set.erase(std::unique(ctx.label_set.begin(), ctx.label_set.end()),
                      ctx.label_set.end());
  ctx.n_labels = ctx.label_set.size();
  std::unordered_map<std::string, std::size_t> label_index;
  for (std::size_t i = 0; i < ctx.label_set.size(); ++i) label_index[ctx.label_set[i]] = i;
  ctx.label_ids.reserve(labels.size());
  for (const auto& label : labels) ctx.label_ids.push_back(label_index.at(label));

  std::vector<std::size_t> members(features.size());
  for (std::size_t i = 0; i < members.size(); ++i) members[i] = i;

  DecisionTreeModel model;
  model.feature_count = ctx.dimensions;
  model.label_set = ctx.label_set;
  model.root = build(ctx, members, 0);
  return model;
}

std::string predict(const DecisionTreeModel& model, const std::vector<double>& x) {
  if (x.size() != model.feature_count) {
    raise(ErrorCode::DimensionMismatch, "input has " + std::to_string(x.size()) +
                                            " features, model expects " +
                                            std::to_string(model.feature_count));
  }
  const TreeNode* node = model.root.get();
  if (node == nullptr) raise(ErrorCode::Internal, "model has no root");
  while (!node->is_leaf()) {
    node = x[static_cast<std::size_t>(node->feature_index)] <= node->threshold
               ? node->left.get()
               : node->right.get();
  }
  return node->label;
}

std::string export_text(const DecisionTreeModel& model) {
  if (model.root == nullptr) raise(ErrorCode::Internal, "model has no root");
  for (const auto& label : model.label_set) {
    if (has_whitespace(label)) {
      raise(ErrorCode::InvalidConfig, "label '" + label + "' cannot appear in the text format");
    }
  }
  std::string out = "tree " + std::to_string(model.feature_count) + " " +
                    std::to_string(model.label_set.size());
  for (const auto& label : model.label_set) out += " " + label;
  out += "\n";
  render_node(*model.root, 0, out);
  return out;
}

DecisionTreeModel import_text(const std::string& text) {
  std::vector<std::string> lines = split_string(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) raise(ErrorCode::ParseError, "tree text is empty");

  const std::vector<std::string> header = tokenize(lines[0]);
  if (header.size() < 3 || header[0] != "tree") {
    raise(ErrorCode::ParseError, "tree text must start with a 'tree' header");
  }
  DecisionTreeModel model;
  model.feature_count = parse_count(header[1]);
  const std::uint64_t n_labels = parse_count(header[2]);
  if (header.size() != 3 + n_labels || n_labels == 0) {
    raise(ErrorCode::ParseError, "tree header names " + header[2] + " labels but lists " +
                                     std::to_string(header.size() - 3));
  }
  for (std::size_t i = 0; i < n_labels; ++i) model.label_set.push_back(header[3 + i]);
  for (std::size_t i = 1; i < model.label_set.size(); ++i) {
    if (!(model.label_set[i - 1] < model.label_set[i])) {
      raise(ErrorCode::ParseError, "tree header labels must be sorted and distinct");
    }
  }

  TextCursor cursor{lines, 1};
  model.root = parse_node(cursor, 0, model);
  if (cursor.pos != lines.size()) {
    raise(ErrorCode::ParseError,
          "trailing content at line " + std::to_string(cursor.pos + 1) + " of tree text");
  }
  return model;
}

} // namespace imvb7
