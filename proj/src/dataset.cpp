#include "imvb7/dataset.hpp"

#include <unordered_map>

#include "csv.hpp"

namespace imvb7 {

const std::vector<std::string>& food_labels() {
  static const std::vector<std::string> labels = {"Fruit", "Fish", "Meat", "Pizza"};
  return labels;
}

bool is_food_label(const std::string& label) {
  for (const auto& l : food_labels()) {
    if (l == label) return true;
  }
  return false;
}

void validate_split_spec(const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0) || !(spec.val_fraction > 0.0) || !(spec.test_fraction > 0.0)) {
    raise(ErrorCode::InvalidConfig, "split fractions must all be positive");
  }
  const double sum = spec.train_fraction + spec.val_fraction + spec.test_fraction;
  if (std::abs(sum - 1.0) > 1e-9) {
    raise(ErrorCode::InvalidConfig, "split fractions must sum to 1.0");
  }
}

namespace {

std::string tuple_key(const AttributeTuple& tuple) {
  return join_strings(tuple, "\x1f");
}

} // namespace

std::vector<SurveyRecord> parse_survey(const std::string& text, const std::string& origin,
                                       const AttributeSchema& schema) {
  auto table = csv::parse(text, origin);
  auto expected = schema.attribute_names();
  expected.push_back("food");
  if (table.header != expected) {
    raise(ErrorCode::ParseError,
          origin + ": header must be the schema attributes in order followed by 'food'");
  }

  std::vector<SurveyRecord> records;
  records.reserve(table.rows.size());
  std::unordered_map<std::string, std::pair<std::string, std::size_t>> seen; // tuple -> (food, line)
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const auto line = std::to_string(table.line_numbers[r]);
    SurveyRecord record;
    record.tuple.assign(row.begin(), row.end() - 1);
    record.food = row.back();
    for (std::size_t a = 0; a < record.tuple.size(); ++a) {
      if (!schema.value_index(a, record.tuple[a])) {
        raise(ErrorCode::UnknownValue,
              origin + ": line " + line + ": '" + record.tuple[a] +
                  "' is not a value of attribute '" + schema.attributes()[a].name + "'");
      }
    }
    if (!is_food_label(record.food)) {
      raise(ErrorCode::UnknownFoodLabel,
            origin + ": line " + line + ": '" + record.food + "' is not one of the four foods");
    }
    auto key = tuple_key(record.tuple);
    auto it = seen.find(key);
    if (it == seen.end()) {
      seen.emplace(std::move(key), std::make_pair(record.food, table.line_numbers[r]));
    } else if (it->second.first != record.food) {
      raise(ErrorCode::DuplicateTuple,
            origin + ": line " + line + " repeats the combination from line " +
                std::to_string(it->second.second) + " with a different food");
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<SurveyRecord> load_survey(const std::string& path, const AttributeSchema& schema) {
  return parse_survey(read_file(path), path, schema);
}

std::string survey_to_csv(const std::vector<SurveyRecord>& records,
                          const AttributeSchema& schema) {
  auto header = schema.attribute_names();
  header.push_back("food");
  std::string out = csv::render_row(header);
  for (const auto& record : records) {
    auto row = record.tuple;
    row.push_back(record.food);
    out += csv::render_row(row);
  }
  return out;
}

std::vector<ImageManifestEntry> parse_manifest(const std::string& text, const std::string& origin,
                                               const AttributeSchema& schema) {
  auto table = csv::parse(text, origin);
  if (table.header.empty() || table.header[0] != "path") {
    raise(ErrorCode::ParseError, origin + ": first manifest column must be 'path'");
  }
  std::vector<std::size_t> attr_indices;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    auto idx = schema.attribute_index(table.header[c]);
    if (!idx) {
      raise(ErrorCode::ParseError,
            origin + ": '" + table.header[c] + "' is not a schema attribute");
    }
    attr_indices.push_back(*idx);
  }

  std::vector<ImageManifestEntry> entries;
  entries.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ImageManifestEntry entry;
    entry.path = row[0];
    for (std::size_t c = 1; c < row.size(); ++c) {
      const std::size_t attr = attr_indices[c - 1];
      if (!schema.value_index(attr, row[c])) {
        raise(ErrorCode::UnknownValue,
              origin + ": line " + std::to_string(table.line_numbers[r]) + ": '" + row[c] +
                  "' is not a value of attribute '" + schema.attributes()[attr].name + "'");
      }
      entry.labels[table.header[c]] = row[c];
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<ImageManifestEntry> load_manifest(const std::string& path,
                                              const AttributeSchema& schema) {
  return parse_manifest(read_file(path), path, schema);
}

} // namespace imvb7
