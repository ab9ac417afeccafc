// imvb7t: command-line front end for the food-recommendation pipeline.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 internal
// invariant violation.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imvb7/dataset.hpp"
#include "imvb7/ensemble.hpp"
#include "imvb7/errors.hpp"
#include "imvb7/image.hpp"
#include "imvb7/metrics.hpp"
#include "imvb7/pipeline.hpp"
#include "imvb7/schema.hpp"
#include "imvb7/tree.hpp"
#include "imvb7/util.hpp"

#include "../src/csv.hpp"

namespace fs = std::filesystem;

namespace {

// Histogram resolution used for the scene recognizer's image features.
constexpr int kSceneHistogramBins = 4;

struct SplitArgs {
  std::string input;
  std::uint64_t seed = 0;
  std::string out_dir;
};

struct EnumerateArgs {
  std::string schema;
  std::string viable;
};

struct EncodeArgs {
  std::string schema;
  std::string tuple;
};

struct ExtractColorArgs {
  std::string image;
  std::string palette;
  std::size_t k = 4;
  std::uint64_t seed = 0;
};

struct TrainImvb7Args {
  std::string manifest;
  std::string schema;
  int iterations = 1;
  int bins = 5;
  std::uint64_t seed = 0;
  std::string out;
};

struct TrainTreeArgs {
  std::string survey;
  std::string schema;
  std::optional<int> max_depth;
  bool include_age = false;
  std::string out;
};

struct RecommendArgs {
  std::string pipeline;
  std::string image;
  std::string manifest;
};

struct EvaluateArgs {
  std::string pipeline;
  std::string survey;
  std::string part = "test";
  std::uint64_t seed = 0;
};

// `split` is schema-agnostic: it partitions the data rows of any CSV and
// repeats the header in all three outputs.
void run_split(const SplitArgs& args) {
  const imvb7::csv::Table table = imvb7::csv::load(args.input);
  imvb7::SplitSpec spec;
  spec.seed = args.seed;
  const auto parts = imvb7::split(table.rows, spec);

  fs::create_directories(args.out_dir);
  const auto write_part = [&](const char* name, const std::vector<std::vector<std::string>>& rows) {
    std::string text = imvb7::csv::render_row(table.header);
    for (const auto& row : rows) text += imvb7::csv::render_row(row);
    imvb7::write_file((fs::path(args.out_dir) / name).string(), text);
  };
  write_part("train.csv", parts.train);
  write_part("val.csv", parts.val);
  write_part("test.csv", parts.test);
}

void run_enumerate(const EnumerateArgs& args) {
  const imvb7::AttributeSchema schema = imvb7::load_schema(args.schema);
  std::vector<imvb7::AttributeTuple> viable;
  std::vector<imvb7::AttributeTuple>* viable_ptr = nullptr;
  if (!args.viable.empty()) {
    viable = imvb7::load_viable_tuples(args.viable, schema);
    viable_ptr = &viable;
  }
  std::string out = imvb7::csv::render_row(schema.attribute_names());
  for (const auto& tuple : imvb7::enumerate_combinations(schema, viable_ptr)) {
    out += imvb7::csv::render_row(tuple);
  }
  std::cout << out;
}

void run_encode(const EncodeArgs& args) {
  const imvb7::AttributeSchema schema = imvb7::load_schema(args.schema);
  const imvb7::AttributeTuple tuple = imvb7::split_string(args.tuple, ',');
  const imvb7::BinaryFeatureVector bits = imvb7::encode(schema, tuple);
  std::string line;
  for (std::uint8_t bit : bits) line += bit ? '1' : '0';
  std::cout << line << "\n";
}

void run_extract_color(const ExtractColorArgs& args) {
  const imvb7::RasterImage image = imvb7::load_ppm(args.image);
  const imvb7::ColorPalette palette = imvb7::load_palette(args.palette);
  std::cout << imvb7::dominant_color(image, palette, args.k, args.seed) << "\n";
}

void run_train_imvb7(const TrainImvb7Args& args) {
  const imvb7::AttributeSchema schema = imvb7::load_schema(args.schema);
  const auto manifest = imvb7::load_manifest(args.manifest, schema);
  const fs::path manifest_dir = fs::path(args.manifest).parent_path();

  std::vector<std::vector<double>> features;
  std::vector<std::string> labels;
  features.reserve(manifest.size());
  labels.reserve(manifest.size());
  for (const auto& entry : manifest) {
    const auto scene = entry.labels.find("scene");
    if (scene == entry.labels.end()) {
      imvb7::raise(imvb7::ErrorCode::InvalidConfig,
                   "manifest row '" + entry.path + "' carries no scene label");
    }
    const imvb7::RasterImage image = imvb7::load_ppm((manifest_dir / entry.path).string());
    features.push_back(imvb7::rgb_histogram(image, kSceneHistogramBins));
    labels.push_back(scene->second);
  }

  imvb7::SelfPaceSchedule schedule;
  schedule.n_iterations = args.iterations;
  const imvb7::MulticlassEnsemble model = imvb7::fit_multiclass(
      features, labels, schedule, args.bins, imvb7::TreeConfig{}, args.seed);
  imvb7::write_file(args.out, imvb7::multiclass_to_text(model));
}

void run_train_tree(const TrainTreeArgs& args) {
  const imvb7::AttributeSchema schema = imvb7::load_schema(args.schema);
  const auto survey = imvb7::load_survey(args.survey, schema);
  imvb7::TreeConfig config;
  config.max_depth = args.max_depth;
  const imvb7::RecommendationPipeline pipeline =
      imvb7::train_pipeline(survey, schema, config, args.include_age);
  imvb7::save_pipeline(pipeline, args.out);
}

void run_recommend(const RecommendArgs& args) {
  const imvb7::RecommendationPipeline pipeline = imvb7::load_pipeline(args.pipeline);
  const auto manifest = imvb7::load_manifest(args.manifest, pipeline.schema);
  const fs::path manifest_dir = fs::path(args.manifest).parent_path();

  const imvb7::ImageManifestEntry* match = nullptr;
  for (const auto& entry : manifest) {
    if (entry.path == args.image) {
      match = &entry;
      break;
    }
  }
  if (match == nullptr) {
    imvb7::raise(imvb7::ErrorCode::InvalidConfig,
                 "image '" + args.image + "' has no row in the manifest");
  }
  imvb7::RecommendInput input;
  input.image_path = (manifest_dir / match->path).string();
  input.labels = match->labels;
  std::cout << imvb7::recommend(pipeline, input) << "\n";
}

void run_evaluate(const EvaluateArgs& args) {
  const imvb7::RecommendationPipeline pipeline = imvb7::load_pipeline(args.pipeline);
  const auto survey = imvb7::load_survey(args.survey, pipeline.schema);
  imvb7::SplitSpec spec;
  spec.seed = args.seed;
  const auto parts = imvb7::split(survey, spec);
  const auto& records =
      args.part == "train" ? parts.train : (args.part == "val" ? parts.val : parts.test);
  const auto inputs = imvb7::survey_to_inputs(records, pipeline.schema);
  std::cout << imvb7::report_to_json(imvb7::evaluate_pipeline(pipeline, inputs));
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"IMVB7t food recommendation pipeline"};
  app.require_subcommand(1);

  SplitArgs split_args;
  CLI::App* split_cmd = app.add_subcommand("split", "Split a CSV into train/val/test files");
  split_cmd->add_option("--input", split_args.input, "CSV file to split")->required();
  split_cmd->add_option("--seed", split_args.seed, "Shuffle seed")->required();
  split_cmd->add_option("--out-dir", split_args.out_dir, "Output directory")->required();

  EnumerateArgs enumerate_args;
  CLI::App* enumerate_cmd =
      app.add_subcommand("enumerate", "List attribute combinations as CSV on stdout");
  enumerate_cmd->add_option("--schema", enumerate_args.schema, "Schema JSON file")->required();
  enumerate_cmd->add_option("--viable", enumerate_args.viable, "Viable-combination CSV filter");

  EncodeArgs encode_args;
  CLI::App* encode_cmd = app.add_subcommand("encode", "One-hot encode a tuple as a bit string");
  encode_cmd->add_option("--schema", encode_args.schema, "Schema JSON file")->required();
  encode_cmd->add_option("--tuple", encode_args.tuple, "Comma-separated attribute values")
      ->required();

  ExtractColorArgs extract_args;
  CLI::App* extract_cmd =
      app.add_subcommand("extract-color", "Dominant color label of a PPM image");
  extract_cmd->add_option("--image", extract_args.image, "PPM image file")->required();
  extract_cmd->add_option("--palette", extract_args.palette, "Palette JSON file")->required();
  extract_cmd->add_option("--k", extract_args.k, "Cluster count")->required();
  extract_cmd->add_option("--seed", extract_args.seed, "Clustering seed")->required();

  TrainImvb7Args train_imvb7_args;
  CLI::App* train_imvb7_cmd =
      app.add_subcommand("train-imvb7", "Train the one-vs-rest scene recognizer");
  train_imvb7_cmd->add_option("--manifest", train_imvb7_args.manifest, "Image manifest CSV")
      ->required();
  train_imvb7_cmd->add_option("--schema", train_imvb7_args.schema, "Schema JSON file")->required();
  train_imvb7_cmd->add_option("--iterations", train_imvb7_args.iterations, "Ensemble iterations")
      ->required();
  train_imvb7_cmd->add_option("--bins", train_imvb7_args.bins, "Hardness bin count")->required();
  train_imvb7_cmd->add_option("--seed", train_imvb7_args.seed, "Master seed")->required();
  train_imvb7_cmd->add_option("--out", train_imvb7_args.out, "Output model file")->required();

  TrainTreeArgs train_tree_args;
  CLI::App* train_tree_cmd =
      app.add_subcommand("train-tree", "Train the recommendation pipeline from a survey");
  train_tree_cmd->add_option("--survey", train_tree_args.survey, "Survey CSV")->required();
  train_tree_cmd->add_option("--schema", train_tree_args.schema, "Schema JSON file")->required();
  int max_depth_value = 0;
  CLI::Option* max_depth_opt =
      train_tree_cmd->add_option("--max-depth", max_depth_value, "Depth cap (default unbounded)");
  train_tree_cmd->add_flag("--include-age", train_tree_args.include_age,
                           "Fuse the age attribute too");
  train_tree_cmd->add_option("--out", train_tree_args.out, "Output pipeline JSON file")
      ->required();

  RecommendArgs recommend_args;
  CLI::App* recommend_cmd = app.add_subcommand("recommend", "Recommend a food for one image");
  recommend_cmd->add_option("--pipeline", recommend_args.pipeline, "Pipeline JSON file")
      ->required();
  recommend_cmd->add_option("--image", recommend_args.image, "Image path as listed in the manifest")
      ->required();
  recommend_cmd->add_option("--manifest", recommend_args.manifest, "Image manifest CSV")
      ->required();

  EvaluateArgs evaluate_args;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "Score a pipeline on a survey split");
  evaluate_cmd->add_option("--pipeline", evaluate_args.pipeline, "Pipeline JSON file")->required();
  evaluate_cmd->add_option("--survey", evaluate_args.survey, "Survey CSV")->required();
  evaluate_cmd->add_option("--split", evaluate_args.part, "Which part to score")
      ->check(CLI::IsMember({"train", "val", "test"}));
  evaluate_cmd->add_option("--seed", evaluate_args.seed, "Split seed")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (split_cmd->parsed()) run_split(split_args);
    if (enumerate_cmd->parsed()) run_enumerate(enumerate_args);
    if (encode_cmd->parsed()) run_encode(encode_args);
    if (extract_cmd->parsed()) run_extract_color(extract_args);
    if (train_imvb7_cmd->parsed()) run_train_imvb7(train_imvb7_args);
    if (train_tree_cmd->parsed()) {
      if (max_depth_opt->count() > 0) train_tree_args.max_depth = max_depth_value;
      run_train_tree(train_tree_args);
    }
    if (recommend_cmd->parsed()) run_recommend(recommend_args);
    if (evaluate_cmd->parsed()) run_evaluate(evaluate_args);
  } catch (const imvb7::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return imvb7::is_internal_error(e.code()) ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
