#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imvb7/tree.hpp"

namespace imvb7 {

// Class labels used inside the binary sub-problems.
inline constexpr const char* kPositiveLabel = "pos";
inline constexpr const char* kNegativeLabel = "neg";

// Self-pace factors alpha_0..alpha_{n-1} on a geometric interpolation from
// alpha_start down to alpha_end (a single-iteration schedule is just
// [alpha_start]).
struct SelfPaceSchedule {
  int n_iterations = 1;
  double alpha_start = 10.0;
  double alpha_end = 0.05;
};

void validate_schedule(const SelfPaceSchedule& schedule);
std::vector<double> schedule_values(const SelfPaceSchedule& schedule);

// Equal-width hardness bins over [0,1]; bin b spans [b/k, (b+1)/k) with the
// last bin closed at 1.0.  mean_hardness of an empty bin is 0 and unused.
struct HardnessBins {
  int k = 5;
  std::vector<std::vector<std::size_t>> members;
  std::vector<double> mean_hardness;
};

// Majority rows carry the negative class, minority rows the positive class.
struct BinarySplitSet {
  std::vector<std::vector<double>> majority;
  std::vector<std::vector<double>> minority;
};

struct EnsembleState {
  std::vector<DecisionTreeModel> base_models;
  int iteration = -1; // |base_models| == iteration + 1 once fit
  SelfPaceSchedule schedule;
  int bin_count = 5;
  std::uint64_t seed = 0;
  // Per-iteration row counts, recorded for the balance invariant; a training
  // diagnostic, not part of the persisted model or of equality.
  std::vector<std::size_t> training_set_sizes;
};

bool operator==(const EnsembleState& a, const EnsembleState& b);
inline bool operator!=(const EnsembleState& a, const EnsembleState& b) { return !(a == b); }

// hardness(x, y) = |F(x) - y| with y in {0,1} (1 = positive class).
std::vector<double> compute_hardness(const EnsembleState& state,
                                     const std::vector<std::vector<double>>& samples,
                                     const std::vector<std::uint8_t>& y_numeric);

HardnessBins bin_by_hardness(const std::vector<double>& hardness, int k);

// Largest-remainder allocation of `target` across positive weights; the
// result sums to target exactly.  Fractional-part ties round up the lower
// index first.
std::vector<std::size_t> allocate_bin_quotas(const std::vector<double>& weights,
                                             std::size_t target);

// Weight non-empty bin b by 1/(mean_hardness_b + alpha), allocate by largest
// remainder, then draw each bin's quota seeded-uniform without replacement
// (with replacement only when the quota exceeds the bin size).
std::vector<std::size_t> self_paced_undersample(const HardnessBins& bins, double alpha,
                                                std::size_t target, std::uint64_t seed);

// Iteration 0 trains on minority plus a seeded random majority under-sample
// of size |minority|; each later iteration re-bins the full majority set by
// hardness under the current ensemble and trains on a fresh balanced set.
EnsembleState fit_binary(const BinarySplitSet& data, const SelfPaceSchedule& schedule, int k,
                         const TreeConfig& tree_config, std::uint64_t seed);

// F(x): mean of base-model positive-class indicators.  The binary label is
// positive iff F(x) >= 0.5.
double predict_score(const EnsembleState& state, const std::vector<double>& x);

// One-vs-rest wrapper.  Classes are sorted lexicographically; class c trains
// a binary ensemble with c as the minority/positive side, swapping roles
// (and flagging the score as inverted) when c outnumbers the rest.
struct MulticlassEnsemble {
  std::vector<std::string> classes; // sorted
  std::vector<EnsembleState> per_class;
  std::vector<std::uint8_t> inverted; // 1 = score is 1 - F(x)
  std::uint64_t seed = 0;
};

bool operator==(const MulticlassEnsemble& a, const MulticlassEnsemble& b);
inline bool operator!=(const MulticlassEnsemble& a, const MulticlassEnsemble& b) {
  return !(a == b);
}

MulticlassEnsemble fit_multiclass(const std::vector<std::vector<double>>& features,
                                  const std::vector<std::string>& labels,
                                  const SelfPaceSchedule& schedule, int k,
                                  const TreeConfig& tree_config, std::uint64_t seed);

// Per-class scores in class order (inversion already applied).
std::vector<double> multiclass_scores(const MulticlassEnsemble& model,
                                      const std::vector<double>& x);

// Argmax of multiclass_scores; ties go to the lowest class index.
std::string predict_multiclass(const MulticlassEnsemble& model, const std::vector<double>& x);

// Text persistence: a header line with the schedule parameters, bin count,
// and seed, followed by one export_text block per base model.
std::string ensemble_to_text(const EnsembleState& state);
EnsembleState ensemble_from_text(const std::string& text);

std::string multiclass_to_text(const MulticlassEnsemble& model);
MulticlassEnsemble multiclass_from_text(const std::string& text);

} // namespace imvb7
