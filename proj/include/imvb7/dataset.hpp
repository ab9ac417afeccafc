#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imvb7/errors.hpp"
#include "imvb7/schema.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

// The four recommendable foods; the survey's closed label set.
const std::vector<std::string>& food_labels();
bool is_food_label(const std::string& label);

// One surveyed attribute combination and the food chosen for it.
struct SurveyRecord {
  AttributeTuple tuple;
  std::string food;

  bool operator==(const SurveyRecord&) const = default;
};

struct ImageManifestEntry {
  std::string path;
  std::map<std::string, std::string> labels; // attribute name -> value
};

// Train/validation/test fractions plus the shuffle seed. Validation and
// test sizes are floor(n * fraction); the remainder goes to train.
struct SplitSpec {
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
};

template <typename T>
struct SplitResult {
  std::vector<T> train;
  std::vector<T> val;
  std::vector<T> test; // the held-out evaluation set
};

void validate_split_spec(const SplitSpec& spec);

// Deterministic seeded shuffle, then a size-exact cut. Same (records, seed)
// gives a bit-identical partition on every platform.
template <typename T>
SplitResult<T> split(const std::vector<T>& records, const SplitSpec& spec) {
  if (records.empty()) raise(ErrorCode::EmptyInput, "cannot split an empty record list");
  validate_split_spec(spec);
  const std::size_t n = records.size();
  const auto val_size = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.val_fraction));
  const auto test_size = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.test_fraction));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  DeterministicRng rng(spec.seed);
  rng.shuffle(order);

  SplitResult<T> result;
  result.train.reserve(n - val_size - test_size);
  result.val.reserve(val_size);
  result.test.reserve(test_size);
  std::size_t cursor = 0;
  for (; cursor < n - val_size - test_size; ++cursor) result.train.push_back(records[order[cursor]]);
  for (; cursor < n - test_size; ++cursor) result.val.push_back(records[order[cursor]]);
  for (; cursor < n; ++cursor) result.test.push_back(records[order[cursor]]);
  return result;
}

// Stratified variant: applies the same rounding rule inside each label
// group (groups visited in sorted label order) and concatenates the parts.
// Off the default path; plain split is the documented behavior.
template <typename T, typename LabelFn>
SplitResult<T> split_stratified(const std::vector<T>& records, const SplitSpec& spec,
                                LabelFn label_of) {
  if (records.empty()) raise(ErrorCode::EmptyInput, "cannot split an empty record list");
  validate_split_spec(spec);
  std::map<std::string, std::vector<T>> groups;
  for (const auto& r : records) groups[label_of(r)].push_back(r);
  SplitResult<T> result;
  std::uint64_t group_index = 0;
  for (auto& [label, group] : groups) {
    SplitSpec group_spec = spec;
    group_spec.seed = derive_seed(spec.seed, group_index++);
    auto part = split(group, group_spec);
    result.train.insert(result.train.end(), part.train.begin(), part.train.end());
    result.val.insert(result.val.end(), part.val.begin(), part.val.end());
    result.test.insert(result.test.end(), part.test.begin(), part.test.end());
  }
  return result;
}

// Survey CSV: header names the schema attributes in order plus a final
// `food` column. A combination appearing twice with conflicting foods is an
// error; exact duplicates pass through.
std::vector<SurveyRecord> load_survey(const std::string& path, const AttributeSchema& schema);
std::vector<SurveyRecord> parse_survey(const std::string& text, const std::string& origin,
                                       const AttributeSchema& schema);
std::string survey_to_csv(const std::vector<SurveyRecord>& records,
                          const AttributeSchema& schema);

// Manifest CSV: header `path,<attribute>...`; every attribute column must
// exist in the schema and every value must be in its vocabulary. Image
// paths are not checked here; consumers open them lazily.
std::vector<ImageManifestEntry> load_manifest(const std::string& path,
                                              const AttributeSchema& schema);
std::vector<ImageManifestEntry> parse_manifest(const std::string& text, const std::string& origin,
                                               const AttributeSchema& schema);

} // namespace imvb7
