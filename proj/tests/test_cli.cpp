#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "semirecon/io.hpp"
#include "semirecon/scenario.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            (std::string("semirecon_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
    write(root_ / "config.json", small_config().dump(2));
  }
  void TearDown() override { fs::remove_all(root_); }

  static json small_config() {
    return json::parse(R"({
      "schema_version": 1,
      "domain": {"kind": "interval", "lengths": [1.0]},
      "horizon": 1.0,
      "synthesis": {"cells": [256], "steps": 256},
      "observation": {"cells": [64], "steps": 128},
      "phi": {"time": "linear", "profile": "constant"},
      "f": {"family": "linear", "c": 1.0},
      "noise": 0.01,
      "seed": 3,
      "reconstruction": {"cells": [64], "window": 4, "bins": 16},
      "output_dir": "unused"
    })");
  }

  static void write(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + SEMIRECON_CLI + "\" " + args + " > \"" +
                            (root_ / "stdout.txt").string() + "\" 2> \"" + (root_ / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const std::string& leaf) const { return "\"" + (root_ / leaf).string() + "\""; }

  fs::path root_;
};

}  // namespace

TEST_F(CliTest, SynthesizeThenReconstruct) {
  ASSERT_EQ(run("synthesize " + path("config.json") + " --out " + path("obs")), 0) << read(root_ / "stderr.txt");
  EXPECT_TRUE(fs::exists(root_ / "obs" / semirecon::io::kFluxFile));
  ASSERT_EQ(run("reconstruct " + path("obs") + " " + path("config.json") + " --out " + path("rec")), 0)
      << read(root_ / "stderr.txt");
  EXPECT_TRUE(fs::exists(root_ / "rec" / "curve.csv"));
  const json diag = json::parse(read(root_ / "rec" / "diagnostics.json"));
  EXPECT_EQ(diag.at("status"), "ok");
  EXPECT_EQ(diag.at("config"), small_config());
  const json metrics = json::parse(read(root_ / "rec" / "metrics.json"));
  EXPECT_EQ(metrics.at("normalization"), "relative");
  EXPECT_GE(metrics.at("relative_linf_error").get<double>(), 0.0);
  EXPECT_FALSE(metrics.contains("timings"));
}

TEST_F(CliTest, RunsAreDeterministicAndSeedMatters) {
  for (const char* d : {"a", "b"}) {
    ASSERT_EQ(run("synthesize " + path("config.json") + " --out " + path(d)), 0);
    ASSERT_EQ(run("reconstruct " + path(d) + " " + path("config.json") + " --out " + path(std::string(d) + "r")), 0);
  }
  for (const char* f : {semirecon::io::kFluxFile, semirecon::io::kMetaFile}) {
    EXPECT_EQ(read(root_ / "a" / f), read(root_ / "b" / f)) << f;
  }
  for (const char* f : {"curve.csv", "diagnostics.json", "metrics.json"}) {
    EXPECT_EQ(read(root_ / "ar" / f), read(root_ / "br" / f)) << f;
  }
  ASSERT_EQ(run("synthesize " + path("config.json") + " --seed 4 --out " + path("c")), 0);
  EXPECT_NE(read(root_ / "a" / semirecon::io::kFluxFile), read(root_ / "c" / semirecon::io::kFluxFile));
}

TEST_F(CliTest, MissingFluxColumnExitsTwoWithoutOutputs) {
  ASSERT_EQ(run("synthesize " + path("config.json") + " --out " + path("obs")), 0);
  const fs::path csv = root_ / "obs" / semirecon::io::kFluxFile;
  std::string text = read(csv);
  text.replace(text.find(",flux,"), 6, ",blah,");
  write(csv, text);
  EXPECT_EQ(run("reconstruct " + path("obs") + " " + path("config.json") + " --out " + path("rec")), 2);
  EXPECT_FALSE(fs::exists(root_ / "rec"));
}

TEST_F(CliTest, NumericalFailureWritesPartialDiagnostics) {
  ASSERT_EQ(run("synthesize " + path("config.json") + " --out " + path("obs")), 0);
  // zero every Dirichlet sample: no knot can be formed
  const fs::path csv = root_ / "obs" / semirecon::io::kFluxFile;
  std::istringstream in(read(csv));
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("node_id", 0) != 0) line = line.substr(0, line.rfind(',')) + ",0";
    out << line << "\n";
  }
  write(csv, out.str());
  EXPECT_EQ(run("reconstruct " + path("obs") + " " + path("config.json") + " --out " + path("rec")), 3);
  const json diag = json::parse(read(root_ / "rec" / "diagnostics.json"));
  EXPECT_EQ(diag.at("status"), "failed");
  EXPECT_FALSE(diag.at("completed_stages").empty());
  EXPECT_FALSE(fs::exists(root_ / "rec" / "curve.csv"));
}

TEST_F(CliTest, BadConfigurationExitsTwo) {
  json bad = small_config();
  bad["reconstruction"]["cells"] = {512};
  write(root_ / "bad.json", bad.dump());
  EXPECT_EQ(run("synthesize " + path("bad.json") + " --out " + path("obs")), 2);
  EXPECT_FALSE(fs::exists(root_ / "obs"));
  write(root_ / "broken.json", "{\"domain\": ");
  EXPECT_EQ(run("synthesize " + path("broken.json")), 2);
  EXPECT_EQ(run("synthesize " + path("missing.json")), 2);
  EXPECT_EQ(run(""), 2);
}

TEST_F(CliTest, VerifySelectsSuites) {
  EXPECT_EQ(run("verify eigenbasis --out " + path("v.json")), 0);
  const json summary = json::parse(read(root_ / "v.json"));
  EXPECT_EQ(summary.at("status"), "pass");
  ASSERT_EQ(summary.at("suites").size(), 1u);
  EXPECT_FALSE(summary.at("suites")[0].contains("seconds"));
  EXPECT_EQ(run("verify nonsense"), 2);
}

TEST(ShippedConfigs, AllParse) {
  int count = 0;
  for (const auto& entry : fs::directory_iterator(SEMIRECON_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    ++count;
    EXPECT_NO_THROW(semirecon::parse_scenario(semirecon::io::read_json(entry.path()))) << entry.path();
  }
  EXPECT_GE(count, 4);
}
