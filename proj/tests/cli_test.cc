// Copyright 2026 The asgcl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asgcl/cli.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "asgcl/io.h"
#include "json.hpp"

namespace asgcl {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("asgcl_cli_test_" +
            std::string(
                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write_config(const std::string& name, const std::string& body) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return run_cli(args, out_, err_);
  }

  std::string out_dir(const std::string& name) const {
    return (dir_ / name).string();
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

constexpr char kSmall[] =
    R"({"dataset":{"sbm":{"n":40,"blocks":2,"p_in":0.3,"p_out":0.05}},)"
    R"("train":{"epochs":4,"hidden":8},"loss":{"batch":16},)"
    R"("eval":{"seeds":[0,1]},"spectra":{"seeds":2},)"
    R"("robustness":{"ratios":[0,0.5]},"sweep":{"k":[0,1]}})";

TEST_F(CliTest, MissingSubcommandIsUsageError) {
  EXPECT_EQ(run({}), kExitUsage);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  EXPECT_EQ(run({"train", "--bogus"}), kExitUsage);
}

TEST_F(CliTest, HelpExitsCleanly) {
  EXPECT_EQ(run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("augment"), std::string::npos);
}

TEST_F(CliTest, ZeroBudgetIsConfigError) {
  const std::string cfg = write_config("c.json", R"({"augment":{"epsilon":0}})");
  EXPECT_EQ(run({"augment", "--config", cfg, "--out", out_dir("o")}),
            kExitConfig);
  EXPECT_NE(err_.str().find("config error"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFileIsConfigError) {
  EXPECT_EQ(run({"train", "--config", out_dir("absent.json")}), kExitConfig);
}

TEST_F(CliTest, MissingDatasetFileIsDataError) {
  const std::string cfg = write_config(
      "c.json",
      R"({"dataset":{"name":"x","edges":"/nonexistent/e","features":"/nonexistent/f"}})");
  EXPECT_EQ(run({"train", "--config", cfg, "--out", out_dir("o")}), kExitData);
}

TEST_F(CliTest, AugmentWritesTrajectories) {
  const std::string cfg = write_config("c.json", kSmall);
  ASSERT_EQ(run({"augment", "--config", cfg, "--out", out_dir("o")}), kExitOk)
      << err_.str();
  for (const char* f : {"augment_view1.csv", "augment_view2.csv",
                        "delta_view1.csv", "delta_view2.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "o" / f)) << f;
  }
}

TEST_F(CliTest, TrainTwiceGivesIdenticalLogs) {
  const std::string cfg = write_config("c.json", kSmall);
  ASSERT_EQ(run({"train", "--config", cfg, "--seed", "1", "--out", out_dir("a")}),
            kExitOk)
      << err_.str();
  ASSERT_EQ(run({"train", "--config", cfg, "--seed", "1", "--out", out_dir("b")}),
            kExitOk);
  const std::string a = read_text_file(dir_ / "a" / "training_log.csv");
  EXPECT_EQ(a, read_text_file(dir_ / "b" / "training_log.csv"));
  EXPECT_EQ(read_text_file(dir_ / "a" / "checkpoint.bin"),
            read_text_file(dir_ / "b" / "checkpoint.bin"));
  EXPECT_EQ(std::count(a.begin(), a.end(), '\n'), 5);
}

TEST_F(CliTest, EvalReadsCheckpointAndWritesMetrics) {
  const std::string cfg = write_config("c.json", kSmall);
  ASSERT_EQ(run({"train", "--config", cfg, "--out", out_dir("o")}), kExitOk);
  ASSERT_EQ(run({"eval", "--config", cfg, "--out", out_dir("o"), "--task",
                 "both", "--raw-baseline"}),
            kExitOk)
      << err_.str();
  nlohmann::json m =
      nlohmann::json::parse(read_text_file(dir_ / "o" / "metrics.json"));
  ASSERT_TRUE(m.is_array());
  bool saw_raw = false, saw_nmi = false;
  for (const auto& rec : m) {
    if (rec["source"] == "raw_features") saw_raw = true;
    if (rec["metric"] == "nmi") saw_nmi = true;
    EXPECT_EQ(rec["seed_count"], 2);
  }
  EXPECT_TRUE(saw_raw);
  EXPECT_TRUE(saw_nmi);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "metrics.csv"));
}

TEST_F(CliTest, EvalWithoutCheckpointIsDataError) {
  const std::string cfg = write_config("c.json", kSmall);
  EXPECT_EQ(run({"eval", "--config", cfg, "--out", out_dir("empty")}),
            kExitData);
}

TEST_F(CliTest, SpectraRanksOptimizedFirst) {
  const std::string cfg =
      write_config("c.json", R"({"dataset":{"sbm":{"n":100}}})");
  ASSERT_EQ(run({"spectra", "--config", cfg, "--out", out_dir("o")}), kExitOk)
      << err_.str();
  std::istringstream csv(read_text_file(dir_ / "o" / "spectra.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "budget,method,mean_flips,mean_distance,std_distance");
  std::vector<std::string> methods;
  std::vector<double> distances;
  while (std::getline(csv, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    methods.push_back(cells[1]);
    distances.push_back(std::stod(cells[3]));
  }
  ASSERT_EQ(methods.size(), 4u);
  EXPECT_EQ(methods[0], "optimized");
  for (size_t i = 1; i < 4; ++i) EXPECT_LT(distances[0], distances[i]);
}

TEST_F(CliTest, RobustnessAndSweepOutputs) {
  const std::string cfg = write_config("c.json", kSmall);
  ASSERT_EQ(run({"robustness", "--config", cfg, "--out", out_dir("o")}), kExitOk)
      << err_.str();
  std::string rob = read_text_file(dir_ / "o" / "robustness.csv");
  EXPECT_EQ(std::count(rob.begin(), rob.end(), '\n'), 5);
  ASSERT_EQ(run({"sweep", "--config", cfg, "--out", out_dir("o"), "--param", "k"}),
            kExitOk)
      << err_.str();
  std::string sweep = read_text_file(dir_ / "o" / "sweep_k.csv");
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 3);
  EXPECT_EQ(run({"sweep", "--config", cfg, "--out", out_dir("o"), "--param",
                 "gamma"}),
            kExitUsage);
}

TEST_F(CliTest, AblationFlagsReachTheManifest) {
  const std::string cfg = write_config("c.json", kSmall);
  ASSERT_EQ(run({"train", "--config", cfg, "--out", out_dir("o"), "--no-upper",
                 "--no-spectral", "--epochs", "2"}),
            kExitOk);
  nlohmann::json m =
      nlohmann::json::parse(read_text_file(dir_ / "o" / "manifest.json"));
  EXPECT_EQ(m["command"], "train");
  EXPECT_EQ(m["config"]["train"]["ablation"]["no_upper"], true);
  EXPECT_EQ(m["config"]["train"]["ablation"]["no_spectral"], true);
  EXPECT_EQ(m["config"]["train"]["epochs"], 2);
  EXPECT_FALSE(fs::exists(dir_ / "o" / "augment_view1.csv"));
}

}  // namespace
}  // namespace asgcl
