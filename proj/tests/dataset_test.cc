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

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cexec/dataset.h"
#include "cexec/error.h"
#include "cexec/io.h"
#include "test_util.h"

namespace cexec {
namespace {

std::vector<SingleLineSource> FixtureSources() {
  std::vector<SingleLineSource> out;
  for (const Json& j :
       ReadJsonl(testing::FixtureDir() / "singleline" / "records.jsonl")) {
    out.push_back({j["id"], j["init"], j["line"], StateFromJson(j["final"]),
                   j["id"]});
  }
  return out;
}

TEST(IngestSingleLineTest, Examples) {
  std::vector<DatasetRecord> records = IngestSingleLine(
      {{"a", "x = 2", "x = x + 1", {{"x", "3"}}, "a"},
       {"b", "x = 2", "y = 1", {}, "b"}});
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].tier, TierPrefix::kSingleLine);
  EXPECT_EQ(records[0].target_tokens, "[LINE] [2] [STATE] x : 3 [STATEEND]");
  EXPECT_EQ(records[0].input_tokens, "[SINGLELINE] [1] x = 2 [2] x = x + 1");
  EXPECT_EQ(records[1].target_tokens, "[LINE] [2] [STATE] [STATEEND]");
  EXPECT_FALSE(records[0].flagged);

  std::vector<DatasetRecord> swap = IngestSingleLine(
      {{"s", "x=2;y=3 ", "x,y = y,x", {{"x", "3"}, {"y", "2"}}, "s"}});
  EXPECT_EQ(swap[0].target_tokens,
            "[LINE] [2] [STATE] x : 3 [DICTSEP] y : 2 [STATEEND]");
  EXPECT_THROW(IngestSingleLine({{"bad", "x = 1", "x = ", {}, "bad"}}), Error);
}

// The stub hook acts as the oracle interpreter; only the deliberately wrong
// record is flagged and every record is kept verbatim.
TEST(IngestSingleLineTest, OracleFlagsDisagreement) {
  std::vector<SingleLineSource> sources = FixtureSources();
  HarnessConfig oracle = testing::StubHarness();
  std::vector<DatasetRecord> plain = IngestSingleLine(sources);
  std::vector<DatasetRecord> checked = IngestSingleLine(sources, &oracle);
  ASSERT_EQ(checked.size(), sources.size());
  for (std::size_t i = 0; i < checked.size(); ++i) {
    EXPECT_EQ(checked[i].flagged, sources[i].id == "sl5") << sources[i].id;
    EXPECT_EQ(checked[i].target_tokens, plain[i].target_tokens);
  }
  EXPECT_EQ(checked[5].input_tokens, "[SINGLELINE] [1] del_me = None");
}

TEST(AssignProblemsTest, CountsAndDeterminism) {
  std::vector<std::string> ids;
  for (int i = 0; i < 10; ++i) ids.push_back("p" + std::to_string(i));
  std::map<std::string, Split> a = AssignProblems(ids, SplitRatios{}, 3);
  std::map<Split, int> counts;
  for (const auto& [id, split] : a) counts[split]++;
  EXPECT_EQ(counts[Split::kTrain], 8);
  EXPECT_EQ(counts[Split::kValid], 1);
  EXPECT_EQ(counts[Split::kTest], 1);
  std::vector<std::string> reversed(ids.rbegin(), ids.rend());
  EXPECT_EQ(AssignProblems(reversed, SplitRatios{}, 3), a);
  EXPECT_THROW(AssignProblems(ids, SplitRatios{0.5, 0.1, 0.1}, 3), Error);
  EXPECT_THROW(AssignProblems(ids, SplitRatios{1.2, -0.1, -0.1}, 3), Error);
}

TEST(BuildSplitTest, ProblemsStayTogetherAndTestHasNoMutants) {
  std::mt19937_64 rng(1);
  std::vector<SplitMember> members;
  for (int p = 0; p < 50; ++p) {
    std::string id = "p" + std::to_string(p);
    int seeds = 1 + static_cast<int>(rng() % 3);
    for (int s = 0; s < seeds; ++s) members.push_back({id, false});
    for (int m = 0; m < static_cast<int>(rng() % 5); ++m) {
      members.push_back({id, true});
    }
  }
  members.push_back({"orphan", true});
  std::shuffle(members.begin(), members.end(), rng);
  SplitIndices split = BuildSplit(members, SplitRatios{}, 9);

  std::map<std::string, std::set<int>> where;
  std::set<std::size_t> seen;
  auto note = [&](const std::vector<std::size_t>& idx, int tag) {
    for (std::size_t i : idx) {
      EXPECT_TRUE(seen.insert(i).second);
      where[members[i].problem_id].insert(tag);
    }
  };
  note(split.train, 0);
  note(split.valid, 1);
  note(split.test, 2);
  for (const auto& [problem, tags] : where) EXPECT_EQ(tags.size(), 1u) << problem;
  EXPECT_EQ(where.count("orphan"), 0u);
  for (std::size_t i : split.test) EXPECT_FALSE(members[i].is_mutant);

  std::set<std::string> test_problems;
  std::size_t expected_excluded = 1;
  for (std::size_t i : split.test) test_problems.insert(members[i].problem_id);
  for (const SplitMember& m : members) {
    if (m.is_mutant && test_problems.count(m.problem_id)) ++expected_excluded;
  }
  EXPECT_EQ(test_problems.size(), 5u);
  EXPECT_EQ(seen.size() + expected_excluded, members.size());
  EXPECT_EQ(split.test, BuildSplit(members, SplitRatios{}, 9).test);
}

DatasetRecord Rec(std::string id, std::string target) {
  DatasetRecord r;
  r.id = std::move(id);
  r.tier = TierPrefix::kSingleLine;
  r.target_tokens = std::move(target);
  r.problem_id = r.id;
  return r;
}

TEST(SelectHardTest, Examples) {
  std::vector<DatasetRecord> records = {
      Rec("a", "[LINE] [2] [STATE] x : 1 [STATEEND]"),
      Rec("b", "[LINE] [2] [STATE] a : 1 [DICTSEP] b : 2 [DICTSEP] c : 3 "
               "[DICTSEP] d : 4 [DICTSEP] e : 5 [STATEEND]")};
  EXPECT_EQ(SelectHard(records, 1.0).size(), 2u);

  std::map<std::string, double> losses = {{"a", 0.9}, {"b", 0.1}};
  std::vector<DatasetRecord> by_loss = SelectHard(records, 0.5, &losses);
  ASSERT_EQ(by_loss.size(), 1u);
  EXPECT_EQ(by_loss[0].id, "a");
  EXPECT_EQ(*by_loss[0].difficulty, 0.9);

  std::vector<DatasetRecord> by_proxy = SelectHard(records, 0.5);
  ASSERT_EQ(by_proxy.size(), 1u);
  EXPECT_EQ(by_proxy[0].id, "b");

  std::map<std::string, double> partial = {{"a", 0.9}};
  try {
    SelectHard(records, 0.5, &partial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingDifficulty);
  }
  EXPECT_THROW(SelectHard(records, 0.0), Error);
  EXPECT_THROW(SelectHard(records, 1.5), Error);
}

TEST(MaterializeStageTest, TierComposition) {
  Corpora corpora;
  for (int i = 0; i < 9; ++i) {
    corpora.single_line.push_back(
        Rec("s" + std::to_string(i),
            "[LINE] [1] [STATE] " + std::string(i % 3 ? "x : 1" : "x : 1 [DICTSEP] y : 2") +
                " [STATEEND]"));
  }
  DatasetRecord t = Rec("t0", "[LINE] [1] [STATE] [STATEEND]");
  t.tier = TierPrefix::kTutorial;
  corpora.tutorial = {t};
  DatasetRecord c = Rec("c0", "[LINE] [1] [STATE] [STATEEND]");
  c.tier = TierPrefix::kCodeNetMut;
  corpora.code_net_mut = {c};

  auto tiers = [](const std::vector<DatasetRecord>& records) {
    std::map<TierPrefix, int> out;
    for (const DatasetRecord& r : records) out[r.tier]++;
    return out;
  };
  StageOptions options;
  options.seed = 4;
  EXPECT_EQ(tiers(MaterializeStage(Stage::kS1, corpora, options)),
            (std::map<TierPrefix, int>{{TierPrefix::kSingleLine, 9}}));
  std::vector<DatasetRecord> s2 = MaterializeStage(Stage::kS2, corpora, options);
  EXPECT_EQ(tiers(s2), (std::map<TierPrefix, int>{{TierPrefix::kSingleLine, 3},
                                                  {TierPrefix::kTutorial, 1}}));
  for (const DatasetRecord& r : s2) {
    if (r.tier == TierPrefix::kSingleLine) {
      EXPECT_NE(r.target_tokens.find("[DICTSEP]"), std::string::npos) << r.id;
    }
  }
  std::vector<DatasetRecord> s3 = MaterializeStage(Stage::kS3, corpora, options);
  EXPECT_EQ(tiers(s3).size(), 3u);
  std::vector<DatasetRecord> again = MaterializeStage(Stage::kS3, corpora, options);
  ASSERT_EQ(again.size(), s3.size());
  for (std::size_t i = 0; i < s3.size(); ++i) {
    EXPECT_EQ(DatasetRecordToJson(again[i]).dump(),
              DatasetRecordToJson(s3[i]).dump());
  }
  EXPECT_EQ(StageFromName("s2"), Stage::kS2);
  EXPECT_THROW(StageFromName("s4"), Error);
}

TEST(ComputeStatsTest, HandCounted) {
  Trace t1;
  t1.lines = {{1, {{"a", "1"}}}, {2, {{"a", "1"}, {"b", "2"}}}};
  Trace t2;
  t2.lines = {{1, {}}, {2, {{"x", "0"}}}, {1, {{"x", "0"}, {"y", "1"}, {"z", "2"}}}};
  CorpusStats stats =
      ComputeStats({{Program::Parse("a = 1\nb = 2\n"), t1},
                    {Program::Parse("x = 0\ny = 1\nz = 2\nw = 3\n"), t2}});
  EXPECT_EQ(stats.n_programs, 2);
  EXPECT_DOUBLE_EQ(stats.avg_code_lines, 3.0);
  EXPECT_DOUBLE_EQ(stats.avg_trace_lines, 2.5);
  EXPECT_DOUBLE_EQ(stats.avg_state_num, 2.5);
  EXPECT_THROW(ComputeStats({}), Error);
}

TEST(DatasetRecordJsonTest, RoundTrip) {
  DatasetRecord r = Rec("x", "[LINE] [1] [STATE] [STATEEND]");
  r.difficulty = 0.25;
  r.flagged = true;
  r.stdout_text = "hi\n";
  DatasetRecord back = DatasetRecordFromJson(DatasetRecordToJson(r));
  EXPECT_EQ(DatasetRecordToJson(back).dump(), DatasetRecordToJson(r).dump());
  EXPECT_EQ(back.difficulty, 0.25);
  EXPECT_TRUE(back.flagged);
}

}  // namespace
}  // namespace cexec
