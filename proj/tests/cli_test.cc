// Copyright 2026 The cexec Authors
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

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "cexec/io.h"
#include "test_util.h"

namespace cexec {
namespace {

using testing::Quote;
using testing::RunCommand;
using testing::ScratchDir;

std::string Cli(const std::string& args) {
  return Quote(testing::CliPath()) + " " + args;
}

std::string Fixture(const std::string& rel) {
  return Quote((testing::FixtureDir() / rel).string());
}

std::string Hook() { return Fixture("trace_hook_stub.py"); }

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(RunCommand(Cli("2>/dev/null")).exit_code, 1);
  EXPECT_EQ(RunCommand(Cli("mutate --bogus 2>/dev/null")).exit_code, 1);
  EXPECT_EQ(RunCommand(Cli("stats 2>/dev/null")).exit_code, 1);
  EXPECT_EQ(RunCommand(Cli("--version")).exit_code, 0);
}

TEST(CliTest, DataErrorsReportJsonOnStderr) {
  ScratchDir dir;
  WriteTextFile(dir / "bad.jsonl", "{not json\n");
  testing::CommandResult r =
      RunCommand(Cli("stats --traced " + Quote(dir / "bad.jsonl") + " 2>" +
                     Quote(dir / "err.txt")));
  EXPECT_EQ(r.exit_code, 2);
  Json err = Json::parse(testing::Slurp(dir / "err.txt"));
  EXPECT_EQ(err["error"], "MalformedRecord");
  EXPECT_TRUE(err.contains("message"));
}

TEST(CliTest, HarnessFailureExitCode) {
  ScratchDir dir;
  testing::CommandResult r = RunCommand(
      Cli("trace --seed-dir " + Fixture("seeds") + " --hook " +
          Fixture("fake_hooks/no_summary.py") + " --out " +
          Quote(dir / "t.jsonl") + " 2>/dev/null"));
  EXPECT_EQ(r.exit_code, 3);
}

TEST(CliTest, MutateIsDeterministicAndWritesManifest) {
  ScratchDir dir;
  for (const char* name : {"a.jsonl", "b.jsonl"}) {
    ASSERT_EQ(RunCommand(Cli("mutate --seed-dir " + Fixture("seeds") +
                             " --n 5 --rng 3 --out " + Quote(dir / name)))
                  .exit_code,
              0);
  }
  std::string a = testing::Slurp(dir / "a.jsonl");
  EXPECT_EQ(a, testing::Slurp(dir / "b.jsonl"));
  std::vector<Json> records = ParseJsonl(a, "a");
  EXPECT_GT(records.size(), 20u);
  EXPECT_EQ(records[0]["origin"], "seed");
  Json manifest = Json::parse(testing::Slurp(dir / "a.jsonl.manifest.json"));
  EXPECT_EQ(manifest["tool"], "cexec");
  EXPECT_EQ(manifest["command"], "mutate");
  EXPECT_EQ(manifest["outputs"][dir / "a.jsonl"], Sha256Hex(a));
  EXPECT_EQ(manifest["inputs"].size(), 31u);
}

TEST(CliTest, StatsOnFixture) {
  testing::CommandResult r =
      RunCommand(Cli("stats --traced " + Fixture("stats/traced.jsonl")));
  ASSERT_EQ(r.exit_code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["n_programs"], 5);
  EXPECT_NEAR(j["avg_code_len"].get<double>(), 13.0 / 5.0, 1e-12);
  EXPECT_NEAR(j["avg_trace_len"].get<double>(), 16.0 / 5.0, 1e-12);
  EXPECT_NEAR(j["avg_state_num"].get<double>(), 2.0, 1e-12);
}

TEST(CliTest, SearchEvalOracleMode) {
  testing::CommandResult r =
      RunCommand(Cli("search-eval --corpus " + Fixture("search/corpus.jsonl") +
                     " --hook " + Hook()));
  ASSERT_EQ(r.exit_code, 0);
  Json j = Json::parse(r.out);
  EXPECT_EQ(j["mode"], "oracle");
  EXPECT_EQ(j["n_queries"], 30);
  EXPECT_DOUBLE_EQ(j["MAP"].get<double>(), 1.0);
}

TEST(CliTest, RankEval) {
  ScratchDir dir;
  WriteTextFile(dir / "r.jsonl",
                R"({"problem_id": "p", "expected_output": "3\n", "solutions": [)"
                R"({"id": "a", "output": "3\n", "is_correct": true},)"
                R"({"id": "b", "output": "4\n", "is_correct": false}]})"
                "\n");
  testing::CommandResult r = RunCommand(
      Cli("rank-eval --ranking " + Quote(dir / "r.jsonl") + " --top-m 2 --k 1,2"));
  ASSERT_EQ(r.exit_code, 0);
  Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["pass@1"].get<double>(), 0.5);
  EXPECT_DOUBLE_EQ(j["pass@2"].get<double>(), 1.0);
}

// mutate -> trace -> build-dataset -> evaluate with the gold as prediction.
TEST(CliTest, EndToEndPipeline) {
  ScratchDir dir;
  ASSERT_EQ(RunCommand(Cli("mutate --seed-dir " + Fixture("seeds") +
                           " --n 4 --rng 1 --out " + Quote(dir / "m.jsonl")))
                .exit_code,
            0);
  ASSERT_EQ(RunCommand(Cli("trace --programs " + Quote(dir / "m.jsonl") +
                           " --hook " + Hook() + " --only-ok --out " +
                           Quote(dir / "t.jsonl")))
                .exit_code,
            0);
  ASSERT_EQ(RunCommand(Cli("build-dataset --codenetmut " + Quote(dir / "t.jsonl") +
                           " --singleline " + Fixture("singleline/records.jsonl") +
                           " --rng 2 --out-dir " + Quote(dir / "ds")))
                .exit_code,
            0);
  for (const char* name : {"train.jsonl", "valid.jsonl", "test.jsonl",
                           "stage_s1.jsonl", "stage_s2.jsonl", "stage_s3.jsonl",
                           "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "ds" / name)) << name;
  }
  std::string test = dir / "ds/test.jsonl";
  testing::CommandResult r = RunCommand(
      Cli("evaluate --pred " + Quote(test) + " --gold " + Quote(test)));
  ASSERT_EQ(r.exit_code, 0);
  Json j = Json::parse(r.out);
  EXPECT_DOUBLE_EQ(j["General"]["Trace Acc."].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["Line"]["F1"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(j["Identifier"]["F1"].get<double>(), 1.0);
  EXPECT_GT(j["n_examples"].get<int>(), 0);

  WriteTextFile(dir / "empty.jsonl", "");
  Json missing = Json::parse(
      RunCommand(Cli("evaluate --pred " + Quote(dir / "empty.jsonl") +
                     " --gold " + Quote(test)))
          .out);
  EXPECT_DOUBLE_EQ(missing["General"]["Trace Acc."].get<double>(), 0.0);
}

}  // namespace
}  // namespace cexec
