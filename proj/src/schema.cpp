#include "imvb7/schema.hpp"

#include <set>
#include <unordered_set>

#include <json.hpp>

#include "csv.hpp"
#include "imvb7/errors.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

AttributeSchema::AttributeSchema(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  std::set<std::string> names;
  offsets_.reserve(attributes_.size());
  for (const auto& attr : attributes_) {
    if (!names.insert(attr.name).second) {
      raise(ErrorCode::InvalidSchema, "duplicate attribute name '" + attr.name + "'");
    }
    if (attr.values.size() < 2) {
      raise(ErrorCode::InvalidSchema,
            "attribute '" + attr.name + "' needs at least 2 values");
    }
    std::set<std::string> values;
    for (const auto& v : attr.values) {
      if (!values.insert(v).second) {
        raise(ErrorCode::InvalidSchema,
              "attribute '" + attr.name + "' repeats value '" + v + "'");
      }
    }
    offsets_.push_back(total_bits_);
    total_bits_ += attr.values.size();
  }
}

std::optional<std::size_t> AttributeSchema::value_index(std::size_t attr_index,
                                                        const std::string& value) const {
  const auto& values = attributes_[attr_index].values;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == value) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> AttributeSchema::attribute_index(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> AttributeSchema::attribute_names() const {
  std::vector<std::string> names;
  names.reserve(attributes_.size());
  for (const auto& attr : attributes_) names.push_back(attr.name);
  return names;
}

AttributeSchema AttributeSchema::without_attribute(const std::string& name) const {
  std::vector<Attribute> kept;
  kept.reserve(attributes_.size());
  for (const auto& attr : attributes_) {
    if (attr.name != name) kept.push_back(attr);
  }
  return AttributeSchema(std::move(kept));
}

AttributeSchema default_schema() {
  return AttributeSchema({
      {"scene", {"beach", "park", "restaurant", "street", "countryside"}},
      {"weather", {"sunny", "rainy", "cloudy", "snowy"}},
      {"period", {"morning", "afternoon", "evening"}},
      {"dominant_color", {"warm", "cool"}},
      {"age", {"child", "adult", "senior"}},
  });
}

AttributeSchema default_environment_schema() {
  return default_schema().without_attribute("age");
}

BinaryFeatureVector encode(const AttributeSchema& schema, const AttributeTuple& tuple) {
  if (tuple.size() != schema.attribute_count()) {
    raise(ErrorCode::ArityMismatch,
          "tuple has " + std::to_string(tuple.size()) + " values, schema has " +
              std::to_string(schema.attribute_count()) + " attributes");
  }
  BinaryFeatureVector bits(schema.total_bits(), 0);
  for (std::size_t a = 0; a < tuple.size(); ++a) {
    auto idx = schema.value_index(a, tuple[a]);
    if (!idx) {
      raise(ErrorCode::UnknownValue,
            "'" + tuple[a] + "' is not a value of attribute '" +
                schema.attributes()[a].name + "'");
    }
    bits[schema.block_offset(a) + *idx] = 1;
  }
  return bits;
}

AttributeTuple decode(const AttributeSchema& schema, const BinaryFeatureVector& vector) {
  if (vector.size() != schema.total_bits()) {
    raise(ErrorCode::MalformedVector,
          "vector length " + std::to_string(vector.size()) + " does not match schema width " +
              std::to_string(schema.total_bits()));
  }
  AttributeTuple tuple;
  tuple.reserve(schema.attribute_count());
  for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
    const std::size_t offset = schema.block_offset(a);
    const std::size_t width = schema.cardinality(a);
    std::size_t set_count = 0;
    std::size_t set_index = 0;
    for (std::size_t i = 0; i < width; ++i) {
      const auto bit = vector[offset + i];
      if (bit != 0 && bit != 1) {
        raise(ErrorCode::MalformedVector,
              "bit " + std::to_string(offset + i) + " holds " + std::to_string(bit));
      }
      if (bit == 1) {
        ++set_count;
        set_index = i;
      }
    }
    if (set_count != 1) {
      raise(ErrorCode::MalformedVector,
            "attribute '" + schema.attributes()[a].name + "' block has " +
                std::to_string(set_count) + " set bits");
    }
    tuple.push_back(schema.attributes()[a].values[set_index]);
  }
  return tuple;
}

BinaryFeatureVector fuse_incremental(const AttributeSchema& schema,
                                     const std::vector<std::vector<std::uint8_t>>& blocks) {
  if (blocks.size() != schema.attribute_count()) {
    raise(ErrorCode::BlockOrderMismatch,
          std::to_string(blocks.size()) + " blocks supplied, schema has " +
              std::to_string(schema.attribute_count()) + " attributes");
  }
  BinaryFeatureVector fused;
  fused.reserve(schema.total_bits());
  for (std::size_t a = 0; a < blocks.size(); ++a) {
    const auto& block = blocks[a];
    if (block.size() != schema.cardinality(a)) {
      raise(ErrorCode::BlockWidthMismatch,
            "block " + std::to_string(a) + " has width " + std::to_string(block.size()) +
                ", attribute '" + schema.attributes()[a].name + "' has cardinality " +
                std::to_string(schema.cardinality(a)));
    }
    std::size_t set_count = 0;
    for (auto bit : block) {
      if (bit != 0 && bit != 1) {
        raise(ErrorCode::MalformedBlock,
              "block " + std::to_string(a) + " holds a value other than 0/1");
      }
      set_count += bit;
    }
    if (set_count != 1) {
      raise(ErrorCode::MalformedBlock,
            "block " + std::to_string(a) + " has " + std::to_string(set_count) + " set bits");
    }
    fused.insert(fused.end(), block.begin(), block.end());
  }
  // The reshaping check: the assembled vector must fill the schema exactly.
  if (fused.size() != schema.total_bits()) {
    raise(ErrorCode::Internal, "fused vector length does not match schema width");
  }
  return fused;
}

namespace {

std::string tuple_key(const AttributeTuple& tuple) {
  return join_strings(tuple, "\x1f");
}

} // namespace

std::vector<AttributeTuple> enumerate_combinations(
    const AttributeSchema& schema, const std::vector<AttributeTuple>* viable) {
  std::unordered_set<std::string> filter;
  if (viable) {
    for (const auto& entry : *viable) {
      if (entry.size() != schema.attribute_count()) {
        raise(ErrorCode::InvalidViableEntry,
              "viable entry has " + std::to_string(entry.size()) + " values");
      }
      for (std::size_t a = 0; a < entry.size(); ++a) {
        if (!schema.value_index(a, entry[a])) {
          raise(ErrorCode::InvalidViableEntry,
                "'" + entry[a] + "' is not a value of attribute '" +
                    schema.attributes()[a].name + "'");
        }
      }
      filter.insert(tuple_key(entry));
    }
  }

  std::vector<AttributeTuple> out;
  if (schema.attribute_count() == 0) {
    // The empty product holds exactly the empty tuple.
    if (!viable || filter.count("")) out.push_back({});
    return out;
  }

  AttributeTuple current(schema.attribute_count());
  std::vector<std::size_t> digits(schema.attribute_count(), 0);
  while (true) {
    for (std::size_t a = 0; a < digits.size(); ++a) {
      current[a] = schema.attributes()[a].values[digits[a]];
    }
    if (!viable || filter.count(tuple_key(current))) out.push_back(current);
    // advance odometer, last attribute fastest
    std::size_t a = digits.size();
    while (a > 0) {
      --a;
      if (++digits[a] < schema.cardinality(a)) break;
      digits[a] = 0;
      if (a == 0) return out;
    }
  }
}

AttributeSchema schema_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, std::string("schema JSON: ") + e.what());
  }
  if (!doc.is_array()) raise(ErrorCode::ParseError, "schema JSON must be an array");
  std::vector<Attribute> attributes;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("name") || !item.contains("values") ||
        !item["name"].is_string() || !item["values"].is_array()) {
      raise(ErrorCode::ParseError, "schema entries need a name and a values array");
    }
    Attribute attr;
    attr.name = item["name"].get<std::string>();
    for (const auto& v : item["values"]) {
      if (!v.is_string()) raise(ErrorCode::ParseError, "schema values must be strings");
      attr.values.push_back(v.get<std::string>());
    }
    attributes.push_back(std::move(attr));
  }
  return AttributeSchema(std::move(attributes));
}

std::string schema_to_json(const AttributeSchema& schema) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& attr : schema.attributes()) {
    doc.push_back({{"name", attr.name}, {"values", attr.values}});
  }
  return doc.dump(2) + "\n";
}

AttributeSchema load_schema(const std::string& path) {
  return schema_from_json(read_file(path));
}

std::vector<AttributeTuple> load_viable_tuples(const std::string& path,
                                               const AttributeSchema& schema) {
  auto table = csv::load(path);
  if (table.header != schema.attribute_names()) {
    raise(ErrorCode::ParseError,
          path + ": header must list the schema attributes in order");
  }
  std::vector<AttributeTuple> tuples;
  tuples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (!schema.value_index(a, row[a])) {
        raise(ErrorCode::InvalidViableEntry,
              path + ": line " + std::to_string(table.line_numbers[r]) + ": '" + row[a] +
                  "' is not a value of attribute '" + schema.attributes()[a].name + "'");
      }
    }
    tuples.push_back(row);
  }
  return tuples;
}

} // namespace imvb7
