// Copyright 2026 The DualAug Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dualaug/cli.hpp"

namespace dualaug {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "dualaug");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("dualaug_test_" + name + ".cfg");
  std::ofstream(p) << text;
  return p;
}

TEST(Cli, HelpExitsZero) {
  const Outcome r = run({"train", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--gate.lambda"), std::string::npos);
}

TEST(Cli, MissingSubcommandIsUsageError) { EXPECT_EQ(run({}).code, 1); }

TEST(Cli, UnknownFlagIsUsageError) {
  const Outcome r = run({"train", "--no-such-flag", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("no-such-flag"), std::string::npos);
}

TEST(Cli, NegativeLambdaInConfigNamesKey) {
  const fs::path cfg = write_config("neg_lambda", "# bad gate\ngate.lambda = -1\n");
  const Outcome r = run({"train", "--config", cfg.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gate.lambda"), std::string::npos) << r.err;
  fs::remove(cfg);
}

TEST(Cli, UnknownConfigKeyAndTypeMismatch) {
  const fs::path unknown = write_config("unknown", "gate.lamda = 1\n");
  Outcome r = run({"train", "-c", unknown.string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gate.lamda"), std::string::npos);
  r = run({"train", "--epochs", "many"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("train.epochs"), std::string::npos) << r.err;
  fs::remove(unknown);
}

TEST(Cli, MissingConfigFileIsUsageError) {
  EXPECT_EQ(run({"train", "--config", "/nonexistent/dualaug.cfg"}).code, 1);
}

// Default per_class is 2000; the config file sets 5 and the flag 7.
TEST(Cli, FlagOverridesConfigOverridesDefault) {
  const fs::path cfg = write_config("precedence", "data.per_class = 5\ndata.classes = 2\n");
  const fs::path file = fs::temp_directory_path() / "dualaug_test_precedence.daug";
  Outcome r = run({"gen-data", "--file", file.string(), "--data.classes", "2", "--data.per_class", "7", "-c", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load(file).size(), 14u);
  r = run({"gen-data", "--file", file.string(), "-c", cfg.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load(file).size(), 10u);
  r = run({"gen-data", "--file", file.string(), "--dataset", "gauss"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load(file).size(), 3u * 2000u);
  fs::remove(cfg);
  fs::remove(file);
}

TEST(Cli, TrainAndScoreDistEndToEnd) {
  const fs::path out = fs::temp_directory_path() / "dualaug_test_cli_run";
  fs::remove_all(out);
  Outcome r = run({"train", "--per-class", "30", "--epochs", "2", "--batch-size", "16", "--seed", "4", "--out",
                   out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("final test accuracy"), std::string::npos);
  EXPECT_TRUE(fs::exists(out / "metrics.csv"));
  const fs::path csv = out / "dist.csv";
  r = run({"score-dist", "--checkpoint", (out / "model.ckpt").string(), "--per-class", "30", "--seed", "4", "--file",
           csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(csv));
  r = run({"score-dist", "--checkpoint", (out / "missing.ckpt").string(), "--per-class", "30"});
  EXPECT_EQ(r.code, 2);
  fs::remove_all(out);
}

TEST(Cli, RuntimeFailureExitsTwo) {
  const Outcome r = run({"train", "--dataset", "/nonexistent/data.daug", "--epochs", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, SweepRejectsUnknownAxis) {
  EXPECT_EQ(run({"sweep", "--axis", "temperature", "--values", "1"}).code, 1);
}

TEST(Cli, AblateTablesAreDeterministic) {
  const std::vector<std::string> args{"ablate", "--per-class", "20", "--epochs", "2", "--batch-size", "16",
                                      "--seed", "7"};
  const Outcome a = run(args);
  const Outcome b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("random_mix"), std::string::npos);
}

}  // namespace
}  // namespace dualaug
