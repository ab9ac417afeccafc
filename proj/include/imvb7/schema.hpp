#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace imvb7 {

// One value name per schema attribute, in schema order.
using AttributeTuple = std::vector<std::string>;

// Concatenated one-hot blocks, one block per attribute. Every element is 0
// or 1 and each block carries exactly one set bit (equal precedence).
using BinaryFeatureVector = std::vector<std::uint8_t>;

struct Attribute {
  std::string name;
  std::vector<std::string> values;

  bool operator==(const Attribute&) const = default;
};

// Ordered catalog of attributes and their categorical vocabularies. The
// ordering of attributes and of values is fixed and defines the bit layout
// of every encoded vector.
class AttributeSchema {
public:
  AttributeSchema() = default;
  // Validates: unique attribute names, unique values per attribute,
  // cardinality >= 2. Raises InvalidSchema otherwise.
  explicit AttributeSchema(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t attribute_count() const { return attributes_.size(); }
  std::size_t total_bits() const { return total_bits_; }

  // Bit offset of attribute `index`'s block.
  std::size_t block_offset(std::size_t index) const { return offsets_[index]; }
  std::size_t cardinality(std::size_t index) const { return attributes_[index].values.size(); }

  // Index of `value` within attribute `attr_index`'s vocabulary, or nullopt.
  std::optional<std::size_t> value_index(std::size_t attr_index, const std::string& value) const;
  std::optional<std::size_t> attribute_index(const std::string& name) const;

  std::vector<std::string> attribute_names() const;

  // Copy of this schema without the named attribute; identity if absent.
  AttributeSchema without_attribute(const std::string& name) const;

  bool operator==(const AttributeSchema& other) const { return attributes_ == other.attributes_; }

private:
  std::vector<Attribute> attributes_;
  std::vector<std::size_t> offsets_;
  std::size_t total_bits_ = 0;
};

// The built-in catalog: scene(5), weather(4), period(3), dominant_color(2)
// as the four environment attributes (product 120) plus age(3) as an
// optional person attribute excluded from environment combinations.
AttributeSchema default_schema();
AttributeSchema default_environment_schema();

// One-hot encode a conforming tuple. Bit for attribute a's value v sits at
// block_offset(a) + value_index(v).
BinaryFeatureVector encode(const AttributeSchema& schema, const AttributeTuple& tuple);

// Inverse of encode. Raises MalformedVector on wrong length, out-of-range
// bit values, or any block without exactly one set bit.
AttributeTuple decode(const AttributeSchema& schema, const BinaryFeatureVector& vector);

// Builds the fused vector by appending per-attribute one-hot blocks in
// schema order, then validates the final length against the schema.
BinaryFeatureVector fuse_incremental(const AttributeSchema& schema,
                                     const std::vector<std::vector<std::uint8_t>>& blocks);

// Full Cartesian product in lexicographic schema order, optionally
// intersected with a viable set (order preserved).
std::vector<AttributeTuple> enumerate_combinations(
    const AttributeSchema& schema,
    const std::vector<AttributeTuple>* viable = nullptr);

// Schema file: ordered JSON array of {"name": ..., "values": [...]}.
AttributeSchema load_schema(const std::string& path);
std::string schema_to_json(const AttributeSchema& schema);
AttributeSchema schema_from_json(const std::string& json_text);

// Viability file: CSV whose header lists the schema's attribute names and
// whose rows are viable tuples.
std::vector<AttributeTuple> load_viable_tuples(const std::string& path,
                                               const AttributeSchema& schema);

} // namespace imvb7
