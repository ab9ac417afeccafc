#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "imvb7/dataset.hpp"

using namespace imvb7;

namespace {

const char* kSurveyHeader = "scene,weather,period,dominant_color,age,food\n";

std::vector<int> iota_records(std::size_t n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

} // namespace

TEST_CASE("the food label set is the closed four") {
  CHECK(food_labels() == std::vector<std::string>{"Fruit", "Fish", "Meat", "Pizza"});
  CHECK(is_food_label("Fish"));
  CHECK(!is_food_label("Sushi"));
}

TEST_CASE("split sizes are exact floors") {
  SplitSpec spec;
  spec.seed = 3;

  auto ten = split(iota_records(10), spec);
  CHECK(ten.train.size() == 8);
  CHECK(ten.val.size() == 1);
  CHECK(ten.test.size() == 1);

  auto big = split(iota_records(50000), spec);
  CHECK(big.train.size() == 40000);
  CHECK(big.val.size() == 5000);
  CHECK(big.test.size() == 5000);

  auto one = split(iota_records(1), spec);
  CHECK(one.train.size() == 1);
  CHECK(one.val.empty());
  CHECK(one.test.empty());
}

TEST_CASE("split parts are disjoint, covering, and seed-deterministic") {
  for (std::size_t n : {1u, 2u, 3u, 9u, 10u, 11u, 50u, 123u, 200u}) {
    for (std::uint64_t seed : {0u, 7u, 991u}) {
      SplitSpec spec;
      spec.seed = seed;
      const auto records = iota_records(n);
      const auto parts = split(records, spec);

      std::vector<int> merged;
      merged.insert(merged.end(), parts.train.begin(), parts.train.end());
      merged.insert(merged.end(), parts.val.begin(), parts.val.end());
      merged.insert(merged.end(), parts.test.begin(), parts.test.end());
      REQUIRE(merged.size() == n);
      std::sort(merged.begin(), merged.end());
      CHECK(merged == records); // disjoint + covering in one comparison

      const auto again = split(records, spec);
      CHECK(again.train == parts.train);
      CHECK(again.val == parts.val);
      CHECK(again.test == parts.test);
    }
  }
}

TEST_CASE("different seeds give different shuffles") {
  SplitSpec a;
  a.seed = 1;
  SplitSpec b;
  b.seed = 2;
  const auto records = iota_records(100);
  CHECK(split(records, a).train != split(records, b).train);
}

TEST_CASE("split input validation") {
  CHECK_CODE(split(std::vector<int>{}, SplitSpec{}), ErrorCode::EmptyInput);
  SplitSpec bad;
  bad.val_fraction = -0.1;
  bad.train_fraction = 1.0;
  CHECK_CODE(validate_split_spec(bad), ErrorCode::InvalidConfig);
  SplitSpec off;
  off.train_fraction = 0.5;
  CHECK_CODE(validate_split_spec(off), ErrorCode::InvalidConfig);
}

TEST_CASE("stratified split applies the rounding rule per label group") {
  struct R {
    std::string label;
    int id;
    bool operator==(const R&) const = default;
  };
  std::vector<R> records;
  for (int i = 0; i < 20; ++i) records.push_back({"x", i});
  for (int i = 0; i < 10; ++i) records.push_back({"y", 100 + i});
  SplitSpec spec;
  spec.seed = 5;
  const auto parts = split_stratified(records, spec, [](const R& r) { return r.label; });
  const auto count = [](const std::vector<R>& rs, const std::string& l) {
    return std::count_if(rs.begin(), rs.end(), [&](const R& r) { return r.label == l; });
  };
  CHECK(count(parts.train, "x") == 16);
  CHECK(count(parts.val, "x") == 2);
  CHECK(count(parts.test, "x") == 2);
  CHECK(count(parts.train, "y") == 8);
  CHECK(count(parts.val, "y") == 1);
  CHECK(count(parts.test, "y") == 1);
}

TEST_CASE("survey parsing: happy path and round trip") {
  const AttributeSchema schema = default_schema();
  const std::string text = std::string(kSurveyHeader) +
                           "beach,sunny,morning,warm,child,Fruit\n"
                           "park,rainy,evening,cool,adult,Meat\n";
  const auto records = parse_survey(text, "test", schema);
  REQUIRE(records.size() == 2);
  CHECK(records[0].tuple == AttributeTuple{"beach", "sunny", "morning", "warm", "child"});
  CHECK(records[0].food == "Fruit");
  CHECK(records[1].food == "Meat");

  CHECK(parse_survey(survey_to_csv(records, schema), "round", schema) == records);

  // Header-only file: empty record list.
  CHECK(parse_survey(kSurveyHeader, "empty", schema).empty());
}

TEST_CASE("survey parsing errors carry codes and line numbers") {
  const AttributeSchema schema = default_schema();
  const auto parse = [&](const std::string& rows) {
    return parse_survey(std::string(kSurveyHeader) + rows, "test", schema);
  };

  CHECK_CODE(parse("beach,foggy,morning,warm,child,Fruit\n"), ErrorCode::UnknownValue);
  CHECK_CODE(parse("beach,sunny,morning,warm,child,Sushi\n"), ErrorCode::UnknownFoodLabel);
  CHECK_CODE(parse("beach,sunny,morning,warm,child,Fruit\n"
                   "beach,sunny,morning,warm,child,Meat\n"),
             ErrorCode::DuplicateTuple);
  // Exact duplicates are consistent answers, not conflicts.
  CHECK(parse("beach,sunny,morning,warm,child,Fruit\n"
              "beach,sunny,morning,warm,child,Fruit\n")
            .size() == 2);
  CHECK_CODE(parse("beach,sunny,morning,warm,child\n"), ErrorCode::ParseError);
  CHECK_CODE(parse_survey("scene,food\nbeach,Fruit\n", "test", schema), ErrorCode::ParseError);
  CHECK_CODE(parse_survey("", "test", schema), ErrorCode::ParseError);

  try {
    parse("park,rainy,evening,cool,adult,Meat\nbeach,foggy,morning,warm,child,Fruit\n");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("manifest parsing validates columns and values") {
  const AttributeSchema schema = default_schema();
  const auto entries = parse_manifest(
      "path,scene,weather\nimg/a.ppm,beach,sunny\nimg/b.ppm,park,rainy\nimg/c.ppm,street,snowy\n",
      "test", schema);
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].path == "img/a.ppm");
  CHECK(entries[0].labels.at("scene") == "beach");
  CHECK(entries[2].labels.at("weather") == "snowy");
  CHECK(entries[0].labels.count("period") == 0);

  CHECK(parse_manifest("path,scene\n", "test", schema).empty());
  CHECK_CODE(parse_manifest("path,scene\nx.ppm,volcano\n", "test", schema),
             ErrorCode::UnknownValue);
  CHECK_CODE(parse_manifest("path,weather\nx.ppm,foggy\n", "test", schema),
             ErrorCode::UnknownValue);
  CHECK_CODE(parse_manifest("path,mood\nx.ppm,happy\n", "test", schema), ErrorCode::ParseError);
  CHECK_CODE(parse_manifest("scene,path\nbeach,x.ppm\n", "test", schema), ErrorCode::ParseError);
}
