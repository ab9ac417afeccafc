#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imvb7/dataset.hpp"
#include "imvb7/ensemble.hpp"
#include "imvb7/image.hpp"
#include "imvb7/metrics.hpp"
#include "imvb7/schema.hpp"
#include "imvb7/tree.hpp"

namespace imvb7 {

// Everything a provider may draw on to produce its attribute value.
struct RecommendInput {
  std::string image_path;
  std::map<std::string, std::string> labels;
};

// One attribute-resolution strategy.  Oracle reads the input's label map;
// DominantColor runs the k-means palette pipeline on the input image;
// ImvbScene classifies the image's RGB histogram with a one-vs-rest
// ensemble.
struct ProviderSpec {
  enum class Kind { Oracle, DominantColor, ImvbScene };

  std::string attribute;
  Kind kind = Kind::Oracle;

  // DominantColor configuration.
  ColorPalette palette;
  std::size_t k = 4;
  std::uint64_t seed = 0;

  // ImvbScene configuration.
  MulticlassEnsemble scene_model;
  int histogram_bins = 4;
};

std::string provider_kind_name(ProviderSpec::Kind kind);

// Produces the attribute value for one input; raises ProviderFailure naming
// the provider and the cause when the input cannot be resolved.
std::string resolve_attribute(const ProviderSpec& provider, const RecommendInput& input);

struct RecommendationPipeline {
  AttributeSchema schema;  // the schema survey files conform to
  AttributeSchema fused;   // encoding schema: `schema` minus age unless included
  bool include_age = false;
  std::vector<ProviderSpec> providers; // one per fused attribute, in order
  DecisionTreeModel recommender;
};

// Encodes every survey record over the fused schema and fits the recommender
// tree; every fused attribute starts with an Oracle provider.
RecommendationPipeline train_pipeline(const std::vector<SurveyRecord>& survey,
                                      const AttributeSchema& schema, const TreeConfig& config,
                                      bool include_age);

// Replaces the provider for spec.attribute; the attribute must be fused.
void set_provider(RecommendationPipeline& pipeline, ProviderSpec spec);

// Runs each provider in schema order, assembles the one-hot vector through
// incremental fusion, and descends the recommender tree.
std::string recommend(const RecommendationPipeline& pipeline, const RecommendInput& input);

struct LabeledInput {
  RecommendInput input;
  std::string food;
};

// Recommends for every input and scores against the four food classes.
MetricReport evaluate_pipeline(const RecommendationPipeline& pipeline,
                               const std::vector<LabeledInput>& inputs);

// Survey rows as oracle-resolvable labeled inputs (no image attached).
std::vector<LabeledInput> survey_to_inputs(const std::vector<SurveyRecord>& records,
                                           const AttributeSchema& schema);

// Persistence: a JSON header holding the schema, the provider configuration,
// and references to side files (recommender tree, palettes, scene models)
// written next to `json_path` and resolved relative to it on load.
void save_pipeline(const RecommendationPipeline& pipeline, const std::string& json_path);
RecommendationPipeline load_pipeline(const std::string& json_path);

} // namespace imvb7
