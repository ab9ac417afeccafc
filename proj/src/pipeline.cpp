#include "imvb7/pipeline.hpp"

#include <filesystem>

#include <json.hpp>

#include "imvb7/errors.hpp"
#include "imvb7/util.hpp"

namespace imvb7 {

namespace {

namespace fs = std::filesystem;

std::string provider_name(const ProviderSpec& provider) {
  return provider_kind_name(provider.kind) + " provider for '" + provider.attribute + "'";
}

// Anything short of an internal invariant violation becomes a
// ProviderFailure naming the provider; Internal keeps its severity.
[[noreturn]] void rethrow_as_provider_failure(const ProviderSpec& provider, const Error& e) {
  if (e.code() == ErrorCode::Internal) throw e;
  raise(ErrorCode::ProviderFailure, provider_name(provider) + ": " + e.what());
}

RasterImage load_provider_image(const ProviderSpec& provider, const RecommendInput& input) {
  if (input.image_path.empty()) {
    raise(ErrorCode::ProviderFailure, provider_name(provider) + ": input carries no image");
  }
  try {
    return load_ppm(input.image_path);
  } catch (const Error& e) {
    rethrow_as_provider_failure(provider, e);
  }
}

// Tuple over `from`, re-ordered onto `to`'s attributes (a subset of `from`).
AttributeTuple project_tuple(const AttributeSchema& from, const AttributeSchema& to,
                             const AttributeTuple& tuple) {
  if (tuple.size() != from.attribute_count()) {
    raise(ErrorCode::ArityMismatch, "tuple has " + std::to_string(tuple.size()) +
                                        " values, schema has " +
                                        std::to_string(from.attribute_count()) + " attributes");
  }
  AttributeTuple projected;
  projected.reserve(to.attribute_count());
  for (const auto& attribute : to.attributes()) {
    const auto index = from.attribute_index(attribute.name);
    if (!index) raise(ErrorCode::Internal, "fused attribute missing from the source schema");
    projected.push_back(tuple[*index]);
  }
  return projected;
}

std::vector<double> to_features(const BinaryFeatureVector& bits) {
  std::vector<double> features(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) features[i] = bits[i];
  return features;
}

AttributeSchema fuse_schema(const AttributeSchema& schema, bool include_age) {
  return include_age ? schema : schema.without_attribute("age");
}

nlohmann::ordered_json provider_to_json(const ProviderSpec& provider, const fs::path& dir,
                                        const std::string& base) {
  nlohmann::ordered_json entry;
  entry["attribute"] = provider.attribute;
  entry["kind"] = provider_kind_name(provider.kind);
  switch (provider.kind) {
    case ProviderSpec::Kind::Oracle:
      break;
    case ProviderSpec::Kind::DominantColor: {
      const std::string file = base + "." + provider.attribute + ".palette.json";
      write_file((dir / file).string(), palette_to_json(provider.palette));
      entry["palette"] = file;
      entry["k"] = provider.k;
      entry["seed"] = provider.seed;
      break;
    }
    case ProviderSpec::Kind::ImvbScene: {
      const std::string file = base + "." + provider.attribute + ".imvb7";
      write_file((dir / file).string(), multiclass_to_text(provider.scene_model));
      entry["model"] = file;
      entry["histogram_bins"] = provider.histogram_bins;
      break;
    }
  }
  return entry;
}

std::string json_string_field(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    raise(ErrorCode::ParseError, std::string("pipeline JSON needs a string '") + key + "' field");
  }
  return doc[key].get<std::string>();
}

ProviderSpec provider_from_json(const nlohmann::json& entry, const fs::path& dir) {
  if (!entry.is_object()) raise(ErrorCode::ParseError, "provider entries must be objects");
  ProviderSpec provider;
  provider.attribute = json_string_field(entry, "attribute");
  const std::string kind = json_string_field(entry, "kind");
  if (kind == "oracle") {
    provider.kind = ProviderSpec::Kind::Oracle;
  } else if (kind == "dominant_color") {
    provider.kind = ProviderSpec::Kind::DominantColor;
    provider.palette = load_palette((dir / json_string_field(entry, "palette")).string());
    if (!entry.contains("k") || !entry["k"].is_number_unsigned()) {
      raise(ErrorCode::ParseError, "dominant_color provider needs an unsigned 'k'");
    }
    provider.k = entry["k"].get<std::size_t>();
    if (!entry.contains("seed") || !entry["seed"].is_number_unsigned()) {
      raise(ErrorCode::ParseError, "dominant_color provider needs an unsigned 'seed'");
    }
    provider.seed = entry["seed"].get<std::uint64_t>();
  } else if (kind == "imvb7_scene") {
    provider.kind = ProviderSpec::Kind::ImvbScene;
    provider.scene_model =
        multiclass_from_text(read_file((dir / json_string_field(entry, "model")).string()));
    if (!entry.contains("histogram_bins") || !entry["histogram_bins"].is_number_integer()) {
      raise(ErrorCode::ParseError, "imvb7_scene provider needs an integer 'histogram_bins'");
    }
    provider.histogram_bins = entry["histogram_bins"].get<int>();
  } else {
    raise(ErrorCode::ParseError, "unknown provider kind '" + kind + "'");
  }
  return provider;
}

} // namespace

std::string provider_kind_name(ProviderSpec::Kind kind) {
  switch (kind) {
    case ProviderSpec::Kind::Oracle: return "oracle";
    case ProviderSpec::Kind::DominantColor: return "dominant_color";
    case ProviderSpec::Kind::ImvbScene: return "imvb7_scene";
  }
  raise(ErrorCode::Internal, "unhandled provider kind");
}

std::string resolve_attribute(const ProviderSpec& provider, const RecommendInput& input) {
  switch (provider.kind) {
    case ProviderSpec::Kind::Oracle: {
      const auto it = input.labels.find(provider.attribute);
      if (it == input.labels.end()) {
        raise(ErrorCode::ProviderFailure,
              provider_name(provider) + ": input has no '" + provider.attribute + "' label");
      }
      return it->second;
    }
    case ProviderSpec::Kind::DominantColor: {
      const RasterImage image = load_provider_image(provider, input);
      try {
        return dominant_color(image, provider.palette, provider.k, provider.seed);
      } catch (const Error& e) {
        rethrow_as_provider_failure(provider, e);
      }
    }
    case ProviderSpec::Kind::ImvbScene: {
      const RasterImage image = load_provider_image(provider, input);
      try {
        const std::vector<double> features = rgb_histogram(image, provider.histogram_bins);
        return predict_multiclass(provider.scene_model, features);
      } catch (const Error& e) {
        rethrow_as_provider_failure(provider, e);
      }
    }
  }
  raise(ErrorCode::Internal, "unhandled provider kind");
}

RecommendationPipeline train_pipeline(const std::vector<SurveyRecord>& survey,
                                      const AttributeSchema& schema, const TreeConfig& config,
                                      bool include_age) {
  RecommendationPipeline pipeline;
  pipeline.schema = schema;
  pipeline.include_age = include_age;
  pipeline.fused = fuse_schema(schema, include_age);

  std::vector<std::vector<double>> features;
  std::vector<std::string> labels;
  features.reserve(survey.size());
  labels.reserve(survey.size());
  for (const auto& record : survey) {
    if (!is_food_label(record.food)) {
      raise(ErrorCode::UnknownFoodLabel, "'" + record.food + "' is not a recommendable food");
    }
    features.push_back(
        to_features(encode(pipeline.fused, project_tuple(schema, pipeline.fused, record.tuple))));
    labels.push_back(record.food);
  }
  pipeline.recommender = fit(features, labels, config);

  for (const auto& attribute : pipeline.fused.attributes()) {
    ProviderSpec provider;
    provider.attribute = attribute.name;
    provider.kind = ProviderSpec::Kind::Oracle;
    pipeline.providers.push_back(std::move(provider));
  }
  return pipeline;
}

void set_provider(RecommendationPipeline& pipeline, ProviderSpec spec) {
  const auto index = pipeline.fused.attribute_index(spec.attribute);
  if (!index) {
    raise(ErrorCode::InvalidConfig,
          "attribute '" + spec.attribute + "' is not fused in this pipeline");
  }
  const auto& vocabulary = pipeline.fused.attributes()[*index].values;
  const auto in_vocabulary = [&](const std::string& value) {
    return std::find(vocabulary.begin(), vocabulary.end(), value) != vocabulary.end();
  };
  if (spec.kind == ProviderSpec::Kind::DominantColor) {
    validate_palette(spec.palette);
    for (const auto& entry : spec.palette.entries) {
      if (!in_vocabulary(entry.label)) {
        raise(ErrorCode::InvalidConfig, "palette label '" + entry.label +
                                            "' is outside the '" + spec.attribute +
                                            "' vocabulary");
      }
    }
  }
  if (spec.kind == ProviderSpec::Kind::ImvbScene) {
    for (const auto& cls : spec.scene_model.classes) {
      if (!in_vocabulary(cls)) {
        raise(ErrorCode::InvalidConfig, "scene model class '" + cls + "' is outside the '" +
                                            spec.attribute + "' vocabulary");
      }
    }
  }
  pipeline.providers[*index] = std::move(spec);
}

std::string recommend(const RecommendationPipeline& pipeline, const RecommendInput& input) {
  const auto& attributes = pipeline.fused.attributes();
  if (pipeline.providers.size() != attributes.size()) {
    raise(ErrorCode::Internal, "provider list does not match the fused schema");
  }
  std::vector<std::vector<std::uint8_t>> blocks;
  blocks.reserve(attributes.size());
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const ProviderSpec& provider = pipeline.providers[i];
    if (provider.attribute != attributes[i].name) {
      raise(ErrorCode::Internal, "provider order diverged from the fused schema");
    }
    const std::string value = resolve_attribute(provider, input);
    const auto value_idx = pipeline.fused.value_index(i, value);
    if (!value_idx) {
      raise(ErrorCode::ProviderFailure, provider_name(provider) + ": produced '" + value +
                                            "', which is outside the attribute's vocabulary");
    }
    std::vector<std::uint8_t> block(attributes[i].values.size(), 0);
    block[*value_idx] = 1;
    blocks.push_back(std::move(block));
  }
  const BinaryFeatureVector fused = fuse_incremental(pipeline.fused, blocks);
  return predict(pipeline.recommender, to_features(fused));
}

MetricReport evaluate_pipeline(const RecommendationPipeline& pipeline,
                               const std::vector<LabeledInput>& inputs) {
  if (inputs.empty()) raise(ErrorCode::EmptyEvaluationSet, "no labeled inputs to evaluate");
  std::vector<std::string> y_true;
  std::vector<std::string> y_pred;
  y_true.reserve(inputs.size());
  y_pred.reserve(inputs.size());
  for (const auto& labeled : inputs) {
    y_true.push_back(labeled.food);
    y_pred.push_back(recommend(pipeline, labeled.input));
  }
  return evaluate(y_true, y_pred, food_labels(), 1.0);
}

std::vector<LabeledInput> survey_to_inputs(const std::vector<SurveyRecord>& records,
                                           const AttributeSchema& schema) {
  const std::vector<std::string> names = schema.attribute_names();
  std::vector<LabeledInput> inputs;
  inputs.reserve(records.size());
  for (const auto& record : records) {
    if (record.tuple.size() != names.size()) {
      raise(ErrorCode::ArityMismatch, "survey tuple has " + std::to_string(record.tuple.size()) +
                                          " values, schema has " + std::to_string(names.size()) +
                                          " attributes");
    }
    LabeledInput labeled;
    for (std::size_t i = 0; i < names.size(); ++i) {
      labeled.input.labels[names[i]] = record.tuple[i];
    }
    labeled.food = record.food;
    inputs.push_back(std::move(labeled));
  }
  return inputs;
}

void save_pipeline(const RecommendationPipeline& pipeline, const std::string& json_path) {
  const fs::path path(json_path);
  const fs::path dir = path.parent_path();
  const std::string base = path.stem().string();

  const std::string tree_file = base + ".tree";
  write_file((dir / tree_file).string(), export_text(pipeline.recommender));

  nlohmann::ordered_json doc;
  doc["schema"] = nlohmann::ordered_json::parse(schema_to_json(pipeline.schema));
  doc["include_age"] = pipeline.include_age;
  doc["recommender"] = tree_file;
  doc["providers"] = nlohmann::ordered_json::array();
  for (const auto& provider : pipeline.providers) {
    doc["providers"].push_back(provider_to_json(provider, dir, base));
  }
  write_file(json_path, doc.dump(2) + "\n");
}

RecommendationPipeline load_pipeline(const std::string& json_path) {
  const fs::path dir = fs::path(json_path).parent_path();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(json_path));
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorCode::ParseError, json_path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema") || !doc.contains("include_age") ||
      !doc["include_age"].is_boolean() || !doc.contains("providers") ||
      !doc["providers"].is_array()) {
    raise(ErrorCode::ParseError, json_path + ": not a pipeline header");
  }

  RecommendationPipeline pipeline;
  pipeline.schema = schema_from_json(doc["schema"].dump());
  pipeline.include_age = doc["include_age"].get<bool>();
  pipeline.fused = fuse_schema(pipeline.schema, pipeline.include_age);
  pipeline.recommender = import_text(read_file((dir / json_string_field(doc, "recommender")).string()));

  if (doc["providers"].size() != pipeline.fused.attribute_count()) {
    raise(ErrorCode::ParseError, json_path + ": provider list does not cover the fused schema");
  }
  for (std::size_t i = 0; i < pipeline.fused.attribute_count(); ++i) {
    ProviderSpec provider = provider_from_json(doc["providers"][i], dir);
    if (provider.attribute != pipeline.fused.attributes()[i].name) {
      raise(ErrorCode::ParseError,
            json_path + ": providers must follow the fused attribute order");
    }
    pipeline.providers.push_back(std::move(provider));
  }
  if (pipeline.recommender.feature_count != pipeline.fused.total_bits()) {
    raise(ErrorCode::ParseError,
          json_path + ": recommender width does not match the fused schema");
  }
  return pipeline;
}

} // namespace imvb7
