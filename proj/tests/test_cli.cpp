#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "imvb7/kernels.hpp"
#include "imvb7/util.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = IMVB7_CLI_PATH;
const std::string kData = IMVB7_DATA_DIR;

struct RunResult {
  int status = -1;
  std::string out;
};

// Runs the CLI through the shell with stderr folded into stdout.
RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string cmd = env_prefix + kCli + " " + args + " 2>&1";
  FILE* stream = popen(cmd.c_str(), "r");
  REQUIRE(stream != nullptr);
  RunResult result;
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof buffer, stream)) > 0) result.out.append(buffer, n);
  const int rc = pclose(stream);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::size_t count_lines(const std::string& text) {
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n' ? 1 : 0;
  return lines;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("imvb7_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

} // namespace

TEST_CASE("encode prints the fused bit string") {
  const RunResult r = run("encode --schema " + kData + "/default_schema.json --tuple beach,sunny,morning,warm,child");
  CHECK(r.status == 0);
  CHECK(r.out == "10000100010010100\n");
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run("").status == 1);
  CHECK(run("encode").status == 1);
  CHECK(run("no-such-command").status == 1);
  CHECK(run("evaluate --pipeline x --survey y --seed 1 --split bogus").status == 1);
}

TEST_CASE("data errors exit with 2 and explain themselves") {
  const RunResult bad_tuple =
      run("encode --schema " + kData + "/default_schema.json --tuple beach,sunny,morning,warm,alien");
  CHECK(bad_tuple.status == 2);
  CHECK(bad_tuple.out.find("error:") != std::string::npos);
  CHECK(run("encode --schema /nonexistent.json --tuple a", "").status == 2);
}

TEST_CASE("enumerate lists combinations, optionally filtered") {
  const RunResult all = run("enumerate --schema " + kData + "/environment_schema.json");
  CHECK(all.status == 0);
  CHECK(count_lines(all.out) == 121); // header + 120 combos
  CHECK(all.out.rfind("scene,weather,period,dominant_color\nbeach,sunny,morning,warm\n", 0) == 0);

  const RunResult filtered = run("enumerate --schema " + kData + "/environment_schema.json" +
                                 " --viable " + kData + "/viable.csv");
  CHECK(filtered.status == 0);
  CHECK(count_lines(filtered.out) == 76); // header + 75 viable rows
}

TEST_CASE("split writes deterministic 80/10/10 parts") {
  TempDir first, second;
  const std::string base = "split --input " + kData + "/survey.csv --seed 9 --out-dir ";
  CHECK(run(base + first.path.string()).status == 0);
  CHECK(run(base + second.path.string()).status == 0);

  const std::string train = imvb7::read_file((first.path / "train.csv").string());
  const std::string val = imvb7::read_file((first.path / "val.csv").string());
  const std::string test = imvb7::read_file((first.path / "test.csv").string());
  CHECK(count_lines(train) == 62); // header + 61 of 75 rows
  CHECK(count_lines(val) == 8);
  CHECK(count_lines(test) == 8);
  CHECK(imvb7::read_file((second.path / "train.csv").string()) == train);
  CHECK(imvb7::read_file((second.path / "val.csv").string()) == val);
  CHECK(imvb7::read_file((second.path / "test.csv").string()) == test);
}

TEST_CASE("extract-color labels the fixture images") {
  const std::string base = "extract-color --palette " + kData + "/palette.json --k 3 --seed 1 --image ";
  const RunResult beach = run(base + kData + "/images/beach_0.ppm");
  CHECK(beach.status == 0);
  CHECK(beach.out == "warm\n");
  const RunResult park = run(base + kData + "/images/park_0.ppm");
  CHECK(park.status == 0);
  CHECK(park.out == "cool\n");
}

TEST_CASE("kernel backend override does not change results") {
  const std::string args = "extract-color --palette " + kData + "/palette.json --k 3 --seed 1 --image " +
                           kData + "/images/countryside_1.ppm";
  const RunResult plain = run(args);
  CHECK(plain.status == 0);
  const RunResult scalar = run(args, "IMVB7_KERNEL_BACKEND=scalar ");
  CHECK(scalar.status == 0);
  CHECK(scalar.out == plain.out);
  if (imvb7::kernels::detected_backend() == imvb7::kernels::Backend::avx2) {
    const RunResult avx2 = run(args, "IMVB7_KERNEL_BACKEND=avx2 ");
    CHECK(avx2.status == 0);
    CHECK(avx2.out == plain.out);
  } else {
    MESSAGE("AVX2 unavailable; override equivalence not exercised");
  }
}

TEST_CASE("train-tree then evaluate closes the loop on the fixture survey") {
  TempDir dir;
  const std::string pipeline = (dir.path / "pipeline.json").string();
  const RunResult trained = run("train-tree --survey " + kData + "/survey.csv --schema " + kData +
                                "/default_schema.json --out " + pipeline);
  CHECK(trained.status == 0);
  CHECK(fs::exists(dir.path / "pipeline.tree"));

  const RunResult on_train = run("evaluate --pipeline " + pipeline + " --survey " + kData +
                                 "/survey.csv --split train --seed 42");
  CHECK(on_train.status == 0);
  const auto train_report = nlohmann::json::parse(on_train.out);
  CHECK(train_report.at("accuracy").get<double>() == 1.0);

  const RunResult on_test = run("evaluate --pipeline " + pipeline + " --survey " + kData +
                                "/survey.csv --split test --seed 42");
  CHECK(on_test.status == 0);
  const auto test_report = nlohmann::json::parse(on_test.out);
  CHECK(test_report.at("accuracy").get<double>() == 1.0);
  CHECK(test_report.at("macro_precision").get<double>() == 0.75);
  CHECK(test_report.at("macro_recall").get<double>() == 0.75);
  CHECK(test_report.at("f_score").get<double>() == 0.75);
  CHECK(test_report.at("beta").get<double>() == 1.0);
}

TEST_CASE("recommend resolves manifest-listed images") {
  TempDir dir;
  const std::string pipeline = (dir.path / "pipeline.json").string();
  CHECK(run("train-tree --survey " + kData + "/survey.csv --schema " + kData +
            "/default_schema.json --out " + pipeline)
            .status == 0);

  const std::string base = "recommend --pipeline " + pipeline + " --manifest " + kData +
                           "/manifest.csv --image ";
  const RunResult beach = run(base + "images/beach_0.ppm");
  CHECK(beach.status == 0);
  CHECK(beach.out == "Fruit\n");
  const RunResult countryside = run(base + "images/countryside_0.ppm");
  CHECK(countryside.status == 0);
  CHECK(countryside.out == "Fish\n");
  CHECK(run(base + "images/unlisted.ppm").status == 2);
}

TEST_CASE("train-imvb7 writes a deterministic model") {
  TempDir dir;
  const std::string first = (dir.path / "scene_a.imvb7").string();
  const std::string second = (dir.path / "scene_b.imvb7").string();
  const std::string base = "train-imvb7 --manifest " + kData + "/manifest.csv --schema " + kData +
                           "/default_schema.json --iterations 2 --bins 3 --seed 5 --out ";
  CHECK(run(base + first).status == 0);
  CHECK(run(base + second).status == 0);
  const std::string model = imvb7::read_file(first);
  CHECK(model == imvb7::read_file(second));
  CHECK(model.rfind("imvb7 5 5\n", 0) == 0);
}
