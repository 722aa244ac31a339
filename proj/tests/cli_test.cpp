// Copyright 2026 The reident Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

int RunCli(const std::string& args) {
  const std::string cmd = std::string(REIDENT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t Lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("reident_cli_" + std::string(
                ::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Out(const std::string& name) const { return "--out " + (dir_ / name).string(); }

  fs::path dir_;
};

constexpr const char* kSmall = "--synthetic n=4 dur=20 -q";

TEST_F(CliTest, MissingDataDirIsIngestError) {
  EXPECT_EQ(RunCli("attack -q --data " + (dir_ / "absent").string() + " " + Out("o")), 1);
  EXPECT_EQ(RunCli("validate -q --data " + (dir_ / "absent").string()), 1);
}

TEST_F(CliTest, BadConfigsExitTwo) {
  EXPECT_EQ(RunCli(std::string("sweep ") + kSmall + " --snippet-frac \"\" " + Out("o")), 2);
  EXPECT_EQ(RunCli(std::string("optimize ") + kSmall + " --grid-step 0.3 " + Out("o")), 2);
  EXPECT_EQ(RunCli(std::string("attack ") + kSmall + " --method vote " + Out("o")), 2);
  EXPECT_EQ(RunCli(std::string("attack ") + kSmall + " --sensors bvp --grid " + Out("o")), 2);
  EXPECT_EQ(RunCli(std::string("attack ") + kSmall + " --weights bvp=0.5 " + Out("o")), 2);
  EXPECT_EQ(RunCli("attack --no-such-flag"), 2);
  EXPECT_EQ(RunCli(""), 2);
  EXPECT_EQ(RunCli("attack -q " + Out("o")), 2);
}

TEST_F(CliTest, SynthValidateAttack) {
  const std::string data = (dir_ / "data").string();
  ASSERT_EQ(RunCli("synth --synthetic n=4 dur=20 seed=5 -q --out " + data), 0);
  EXPECT_EQ(RunCli("validate -q --data " + data), 0);
  EXPECT_EQ(RunCli("attack -q --data " + data + " " + Out("a")), 0);
  EXPECT_EQ(Lines(dir_ / "a" / "report.csv"), 4u);
  ::setenv("REIDENT_DATA_DIR", data.c_str(), 1);
  EXPECT_EQ(RunCli("attack -q --class weighted --method rank " + Out("b")), 0);
  ::unsetenv("REIDENT_DATA_DIR");
  EXPECT_EQ(Lines(dir_ / "b" / "report.csv"), 6u);
  // A run config replays through --config.
  EXPECT_EQ(RunCli("attack -q --config " + (dir_ / "b" / "run_config.json").string() + " " +
                Out("c")),
            0);
  std::ifstream b(dir_ / "b" / "report.csv"), c(dir_ / "c" / "report.csv");
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(b), {}),
            std::string(std::istreambuf_iterator<char>(c), {}));
}

TEST_F(CliTest, SweepTables) {
  ASSERT_EQ(RunCli(std::string("sweep ") + kSmall + " --kind sensors,sizes " + Out("s")), 0);
  EXPECT_EQ(Lines(dir_ / "s" / "sensor_combinations.csv"), 16u);
  EXPECT_EQ(Lines(dir_ / "s" / "set_sizes.csv"), 6u);
}

TEST_F(CliTest, OptimizeAndHeatmap) {
  EXPECT_EQ(RunCli(std::string("optimize ") + kSmall +
                " --class weighted --grid-step 0.5 --objective-k 1,2 " + Out("o")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "comparison.csv"));
  EXPECT_EQ(RunCli(std::string("heatmap ") + kSmall + " --segment-s 2 " + Out("h")), 0);
  EXPECT_EQ(Lines(dir_ / "h" / "heatmap_aggregate.csv"), 5u);
}

}  // namespace
