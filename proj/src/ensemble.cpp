#include "imvb7/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "imvb7/errors.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

namespace {

struct SampledSet {
  std::vector<std::vector<double>> features;
  std::vector<std::string> labels;
};

// Balanced per-iteration training set: the chosen majority rows (negative)
// followed by the full minority set (positive).
SampledSet assemble_training_set(const BinarySplitSet& data,
                                 const std::vector<std::size_t>& majority_sample) {
  SampledSet set;
  set.features.reserve(majority_sample.size() + data.minority.size());
  for (std::size_t i : majority_sample) {
    set.features.push_back(data.majority[i]);
    set.labels.push_back(kNegativeLabel);
  }
  for (const auto& row : data.minority) {
    set.features.push_back(row);
    set.labels.push_back(kPositiveLabel);
  }
  return set;
}

std::vector<std::string> text_lines(const std::string& text) {
  std::vector<std::string> lines = split_string(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> header_tokens(const std::string& line) {
  std::vector<std::string> tokens;
  for (const auto& piece : split_string(line, ' ')) {
    if (!piece.empty()) tokens.push_back(piece);
  }
  return tokens;
}

double parse_real(const std::string& token, const char* what) {
  char* end = nullptr;
  const double value = std::strtod(token.c_str(), &end);
  if (token.empty() || end != token.c_str() + token.size()) {
    raise(ErrorCode::ParseError, std::string("bad ") + what + " '" + token + "'");
  }
  return value;
}

std::uint64_t parse_whole(const std::string& token, const char* what) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
    raise(ErrorCode::ParseError, std::string("bad ") + what + " '" + token + "'");
  }
  return std::strtoull(token.c_str(), nullptr, 10);
}

// Reassemble the export_text blocks that begin at each `tree` header line.
std::vector<DecisionTreeModel> parse_tree_blocks(const std::vector<std::string>& lines,
                                                 std::size_t begin, std::size_t end,
                                                 std::size_t expected) {
  std::vector<DecisionTreeModel> models;
  std::size_t pos = begin;
  while (pos < end) {
    if (lines[pos].rfind("tree ", 0) != 0) {
      raise(ErrorCode::ParseError, "expected a tree block at line " + std::to_string(pos + 1));
    }
    std::size_t next = pos + 1;
    while (next < end && lines[next].rfind("tree ", 0) != 0) ++next;
    std::string block;
    for (std::size_t i = pos; i < next; ++i) block += lines[i] + "\n";
    models.push_back(import_text(block));
    pos = next;
  }
  if (models.size() != expected) {
    raise(ErrorCode::ParseError, "header promises " + std::to_string(expected) +
                                     " base models, found " + std::to_string(models.size()));
  }
  return models;
}

std::string ensemble_header(const EnsembleState& state) {
  return "ensemble " + std::to_string(state.schedule.n_iterations) + " " +
         format_double(state.schedule.alpha_start) + " " +
         format_double(state.schedule.alpha_end) + " " + std::to_string(state.bin_count) + " " +
         std::to_string(state.seed) + " " + std::to_string(state.base_models.size()) + "\n";
}

EnsembleState parse_ensemble_header(const std::vector<std::string>& tokens) {
  if (tokens.size() != 7 || tokens[0] != "ensemble") {
    raise(ErrorCode::ParseError, "malformed ensemble header");
  }
  EnsembleState state;
  state.schedule.n_iterations = static_cast<int>(parse_whole(tokens[1], "iteration count"));
  state.schedule.alpha_start = parse_real(tokens[2], "alpha_start");
  state.schedule.alpha_end = parse_real(tokens[3], "alpha_end");
  state.bin_count = static_cast<int>(parse_whole(tokens[4], "bin count"));
  state.seed = parse_whole(tokens[5], "seed");
  return state;
}

} // namespace

bool operator==(const EnsembleState& a, const EnsembleState& b) {
  return a.iteration == b.iteration && a.bin_count == b.bin_count && a.seed == b.seed &&
         a.schedule.n_iterations == b.schedule.n_iterations &&
         a.schedule.alpha_start == b.schedule.alpha_start &&
         a.schedule.alpha_end == b.schedule.alpha_end && a.base_models == b.base_models;
}

bool operator==(const MulticlassEnsemble& a, const MulticlassEnsemble& b) {
  return a.classes == b.classes && a.inverted == b.inverted && a.seed == b.seed &&
         a.per_class == b.per_class;
}

void validate_schedule(const SelfPaceSchedule& schedule) {
  if (schedule.n_iterations < 1) {
    raise(ErrorCode::InvalidSchedule, "schedule needs at least one iteration");
  }
  if (!(schedule.alpha_start > 0.0) || !(schedule.alpha_end > 0.0)) {
    raise(ErrorCode::InvalidSchedule, "self-pace factors must be positive");
  }
  if (schedule.n_iterations > 1 && !(schedule.alpha_start > schedule.alpha_end)) {
    raise(ErrorCode::InvalidSchedule, "alpha_start must exceed alpha_end");
  }
}

std::vector<double> schedule_values(const SelfPaceSchedule& schedule) {
  validate_schedule(schedule);
  const int n = schedule.n_iterations;
  std::vector<double> values(static_cast<std::size_t>(n));
  values[0] = schedule.alpha_start;
  if (n == 1) return values;
  const double ratio = schedule.alpha_end / schedule.alpha_start;
  for (int i = 1; i < n - 1; ++i) {
    values[static_cast<std::size_t>(i)] =
        schedule.alpha_start * std::pow(ratio, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  values[static_cast<std::size_t>(n - 1)] = schedule.alpha_end; // exact endpoint
  return values;
}

std::vector<double> compute_hardness(const EnsembleState& state,
                                     const std::vector<std::vector<double>>& samples,
                                     const std::vector<std::uint8_t>& y_numeric) {
  if (state.base_models.empty()) {
    raise(ErrorCode::EmptyEnsemble, "hardness needs at least one base model");
  }
  if (samples.size() != y_numeric.size()) {
    raise(ErrorCode::LengthMismatch, std::to_string(samples.size()) + " samples vs " +
                                         std::to_string(y_numeric.size()) + " labels");
  }
  std::vector<double> hardness;
  hardness.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (y_numeric[i] > 1) raise(ErrorCode::InvalidConfig, "numeric labels must be 0 or 1");
    const double f = predict_score(state, samples[i]);
    hardness.push_back(std::fabs(f - static_cast<double>(y_numeric[i])));
  }
  return hardness;
}

HardnessBins bin_by_hardness(const std::vector<double>& hardness, int k) {
  if (k < 1) raise(ErrorCode::InvalidBinCount, "bin count must be at least 1");
  HardnessBins bins;
  bins.k = k;
  bins.members.assign(static_cast<std::size_t>(k), {});
  bins.mean_hardness.assign(static_cast<std::size_t>(k), 0.0);
  for (std::size_t i = 0; i < hardness.size(); ++i) {
    const double h = hardness[i];
    if (!(h >= 0.0) || !(h <= 1.0)) {
      raise(ErrorCode::InvalidConfig, "hardness " + format_double(h) + " outside [0,1]");
    }
    // floor(h*k), with 1.0 folded into the last (closed) bin.
    auto b = static_cast<std::size_t>(h * static_cast<double>(k));
    if (b >= static_cast<std::size_t>(k)) b = static_cast<std::size_t>(k) - 1;
    bins.members[b].push_back(i);
  }
  for (std::size_t b = 0; b < bins.members.size(); ++b) {
    if (bins.members[b].empty()) continue;
    double sum = 0.0;
    for (std::size_t i : bins.members[b]) sum += hardness[i];
    bins.mean_hardness[b] = sum / static_cast<double>(bins.members[b].size());
  }
  return bins;
}

std::vector<std::size_t> allocate_bin_quotas(const std::vector<double>& weights,
                                             std::size_t target) {
  if (weights.empty()) raise(ErrorCode::NoNonEmptyBins, "no weights to allocate across");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) raise(ErrorCode::InvalidConfig, "allocation weights must be positive");
    total += w;
  }
  std::vector<std::size_t> quotas(weights.size());
  std::vector<double> remainders(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double share = static_cast<double>(target) * weights[i] / total;
    quotas[i] = static_cast<std::size_t>(std::floor(share));
    remainders[i] = share - std::floor(share);
    assigned += quotas[i];
  }
  // Hand the leftover units to the largest remainders, lower index first.
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t i = 0; assigned < target; ++i) {
    quotas[order[i % order.size()]] += 1;
    assigned += 1;
  }
  return quotas;
}

std::vector<std::size_t> self_paced_undersample(const HardnessBins& bins, double alpha,
                                                std::size_t target, std::uint64_t seed) {
  if (target < 1) raise(ErrorCode::InvalidTarget, "target must be at least 1");
  if (!(alpha > 0.0)) raise(ErrorCode::InvalidConfig, "alpha must be positive");
  std::vector<std::size_t> occupied;
  std::vector<double> weights;
  for (std::size_t b = 0; b < bins.members.size(); ++b) {
    if (bins.members[b].empty()) continue;
    occupied.push_back(b);
    weights.push_back(1.0 / (bins.mean_hardness[b] + alpha));
  }
  if (occupied.empty()) raise(ErrorCode::NoNonEmptyBins, "every hardness bin is empty");

  const std::vector<std::size_t> quotas = allocate_bin_quotas(weights, target);
  std::vector<std::size_t> chosen;
  chosen.reserve(target);
  for (std::size_t slot = 0; slot < occupied.size(); ++slot) {
    const std::vector<std::size_t>& pool = bins.members[occupied[slot]];
    const std::size_t quota = quotas[slot];
    DeterministicRng rng(derive_seed(seed, occupied[slot]));
    if (quota <= pool.size()) {
      std::vector<std::size_t> shuffled(pool);
      rng.shuffle(shuffled);
      chosen.insert(chosen.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(quota));
    } else {
      for (std::size_t d = 0; d < quota; ++d) {
        chosen.push_back(pool[rng.below(pool.size())]);
      }
    }
  }
  return chosen;
}

EnsembleState fit_binary(const BinarySplitSet& data, const SelfPaceSchedule& schedule, int k,
                         const TreeConfig& tree_config, std::uint64_t seed) {
  validate_schedule(schedule);
  if (k < 1) raise(ErrorCode::InvalidBinCount, "bin count must be at least 1");
  if (data.minority.empty()) {
    raise(ErrorCode::InvalidConfig, "minority set must hold at least one example");
  }
  if (data.majority.size() < data.minority.size()) {
    raise(ErrorCode::InvalidConfig, "majority set smaller than minority set: swap the roles");
  }
  const std::size_t dims = data.minority[0].size();
  for (const auto& row : data.minority) {
    if (row.size() != dims) raise(ErrorCode::ShapeMismatch, "minority rows differ in dimensionality");
  }
  for (const auto& row : data.majority) {
    if (row.size() != dims) raise(ErrorCode::ShapeMismatch, "majority rows differ in dimensionality");
  }

  EnsembleState state;
  state.schedule = schedule;
  state.bin_count = k;
  state.seed = seed;
  const std::size_t target = data.minority.size();
  const std::vector<double> alphas = schedule_values(schedule);

  // Iteration 0: plain seeded random under-sample of the majority set.
  {
    std::vector<std::size_t> indices(data.majority.size());
    std::iota(indices.begin(), indices.end(), 0);
    DeterministicRng rng(derive_seed(seed, 0));
    rng.shuffle(indices);
    indices.resize(target);
    const SampledSet set = assemble_training_set(data, indices);
    state.base_models.push_back(fit(set.features, set.labels, tree_config));
    state.training_set_sizes.push_back(set.features.size());
    state.iteration = 0;
  }

  std::vector<std::uint8_t> majority_y(data.majority.size(), 0);
  for (int i = 1; i < schedule.n_iterations; ++i) {
    const std::vector<double> hardness = compute_hardness(state, data.majority, majority_y);
    const HardnessBins bins = bin_by_hardness(hardness, k);
    const std::vector<std::size_t> sample = self_paced_undersample(
        bins, alphas[static_cast<std::size_t>(i)], target, derive_seed(seed, static_cast<std::uint64_t>(i)));
    const SampledSet set = assemble_training_set(data, sample);
    state.base_models.push_back(fit(set.features, set.labels, tree_config));
    state.training_set_sizes.push_back(set.features.size());
    state.iteration = i;
  }
  return state;
}

double predict_score(const EnsembleState& state, const std::vector<double>& x) {
  if (state.base_models.empty()) {
    raise(ErrorCode::EmptyEnsemble, "score needs at least one base model");
  }
  std::size_t positives = 0;
  for (const auto& model : state.base_models) {
    if (predict(model, x) == kPositiveLabel) positives += 1;
  }
  return static_cast<double>(positives) / static_cast<double>(state.base_models.size());
}

MulticlassEnsemble fit_multiclass(const std::vector<std::vector<double>>& features,
                                  const std::vector<std::string>& labels,
                                  const SelfPaceSchedule& schedule, int k,
                                  const TreeConfig& tree_config, std::uint64_t seed) {
  if (features.size() != labels.size()) {
    raise(ErrorCode::ShapeMismatch, std::to_string(features.size()) + " feature rows vs " +
                                        std::to_string(labels.size()) + " labels");
  }
  MulticlassEnsemble model;
  model.seed = seed;
  model.classes = labels;
  std::sort(model.classes.begin(), model.classes.end());
  model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                      model.classes.end());
  if (model.classes.size() < 2) {
    raise(ErrorCode::SingleClassInput, "one-vs-rest needs at least two classes");
  }

  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    BinarySplitSet split;
    for (std::size_t i = 0; i < features.size(); ++i) {
      if (labels[i] == model.classes[c]) {
        split.minority.push_back(features[i]);
      } else {
        split.majority.push_back(features[i]);
      }
    }
    // The class side is the positive minority unless it outnumbers the rest,
    // in which case the roles (and the score) are flipped.
    const bool flip = split.minority.size() > split.majority.size();
    if (flip) std::swap(split.minority, split.majority);
    model.inverted.push_back(flip ? 1 : 0);
    model.per_class.push_back(
        fit_binary(split, schedule, k, tree_config, derive_seed(seed, c)));
  }
  return model;
}

std::vector<double> multiclass_scores(const MulticlassEnsemble& model,
                                      const std::vector<double>& x) {
  if (model.per_class.empty()) raise(ErrorCode::EmptyEnsemble, "multiclass model has no classes");
  std::vector<double> scores;
  scores.reserve(model.per_class.size());
  for (std::size_t c = 0; c < model.per_class.size(); ++c) {
    const double f = predict_score(model.per_class[c], x);
    scores.push_back(model.inverted[c] ? 1.0 - f : f);
  }
  return scores;
}

std::string predict_multiclass(const MulticlassEnsemble& model, const std::vector<double>& x) {
  const std::vector<double> scores = multiclass_scores(model, x);
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return model.classes[best];
}

std::string ensemble_to_text(const EnsembleState& state) {
  std::string out = ensemble_header(state);
  for (const auto& model : state.base_models) out += export_text(model);
  return out;
}

EnsembleState ensemble_from_text(const std::string& text) {
  const std::vector<std::string> lines = text_lines(text);
  if (lines.empty()) raise(ErrorCode::ParseError, "ensemble text is empty");
  EnsembleState state = parse_ensemble_header(header_tokens(lines[0]));
  const std::size_t expected = parse_whole(header_tokens(lines[0])[6], "model count");
  state.base_models = parse_tree_blocks(lines, 1, lines.size(), expected);
  state.iteration = static_cast<int>(state.base_models.size()) - 1;
  return state;
}

std::string multiclass_to_text(const MulticlassEnsemble& model) {
  std::string out = "imvb7 " + std::to_string(model.classes.size()) + " " +
                    std::to_string(model.seed) + "\n";
  for (std::size_t c = 0; c < model.classes.size(); ++c) {
    out += "class " + model.classes[c] + " " + (model.inverted[c] ? "inverted" : "direct") + "\n";
    out += ensemble_to_text(model.per_class[c]);
  }
  return out;
}

MulticlassEnsemble multiclass_from_text(const std::string& text) {
  const std::vector<std::string> lines = text_lines(text);
  if (lines.empty()) raise(ErrorCode::ParseError, "ensemble text is empty");
  const std::vector<std::string> header = header_tokens(lines[0]);
  if (header.size() != 3 || header[0] != "imvb7") {
    raise(ErrorCode::ParseError, "malformed multiclass header");
  }
  MulticlassEnsemble model;
  const std::size_t n_classes = parse_whole(header[1], "class count");
  model.seed = parse_whole(header[2], "seed");

  std::size_t pos = 1;
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (pos >= lines.size() || lines[pos].rfind("class ", 0) != 0) {
      raise(ErrorCode::ParseError, "expected a class line at line " + std::to_string(pos + 1));
    }
    const std::vector<std::string> tokens = header_tokens(lines[pos]);
    if (tokens.size() != 3 || (tokens[2] != "direct" && tokens[2] != "inverted")) {
      raise(ErrorCode::ParseError, "malformed class line '" + lines[pos] + "'");
    }
    model.classes.push_back(tokens[1]);
    model.inverted.push_back(tokens[2] == "inverted" ? 1 : 0);
    pos += 1;

    if (pos >= lines.size() || lines[pos].rfind("ensemble ", 0) != 0) {
      raise(ErrorCode::ParseError, "expected an ensemble block at line " + std::to_string(pos + 1));
    }
    std::size_t end = pos + 1;
    while (end < lines.size() && lines[end].rfind("class ", 0) != 0) ++end;
    std::string block;
    for (std::size_t i = pos; i < end; ++i) block += lines[i] + "\n";
    model.per_class.push_back(ensemble_from_text(block));
    pos = end;
  }
  if (pos != lines.size()) {
    raise(ErrorCode::ParseError, "trailing content at line " + std::to_string(pos + 1));
  }
  for (std::size_t c = 1; c < model.classes.size(); ++c) {
    if (!(model.classes[c - 1] < model.classes[c])) {
      raise(ErrorCode::ParseError, "class labels must be sorted and distinct");
    }
  }
  return model;
}

} // namespace imvb7
