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
#include <set>
#include <string>
#include <vector>

#include "cexec/error.h"
#include "cexec/io.h"
#include "cexec/mutation.h"
#include "mutation_oracle.h"
#include "test_util.h"

namespace cexec {
namespace {

using Op = MutationOperator;

CandidateSite SiteOf(const Program& p, SiteKind kind, int index = 0) {
  for (const CandidateSite& site : FindCandidates(p)) {
    if (site.kind == kind && index-- == 0) {
      return site;
    }
  }
  ADD_FAILURE() << "no site of kind " << SiteKindName(kind);
  return CandidateSite{};
}

std::string Apply(const std::string& source, SiteKind kind, Op op,
                  std::uint64_t seed = 1, int index = 0) {
  Program p = Program::Parse(source);
  Rng rng(seed);
  return ApplyOperator(p, SiteOf(p, kind, index), op, rng).source();
}

TEST(ApplyOperatorTest, WorkedExamples) {
  Program ror = Program::Parse("r = x <= y\n");
  EXPECT_EQ(ApplyReplacement(ror, SiteOf(ror, SiteKind::kRelational), Op::kROR,
                             ">")
                .source(),
            "r = x > y\n");
  Program aor = Program::Parse("r = x * y\n");
  EXPECT_EQ(ApplyReplacement(aor, SiteOf(aor, SiteKind::kBinaryArithmetic),
                             Op::kAOR, "/")
                .source(),
            "r = x / y\n");
  EXPECT_EQ(Apply("r = a and b\n", SiteKind::kLogicalConnector, Op::kLCR),
            "r = a or b\n");
  EXPECT_EQ(Apply("r = a or b\n", SiteKind::kLogicalConnector, Op::kLCR),
            "r = a and b\n");
  EXPECT_EQ(Apply("r = not done\n", SiteKind::kNegation, Op::kCOD),
            "r = done\n");
  EXPECT_EQ(Apply("r = a not in b\n", SiteKind::kNegation, Op::kCOD),
            "r = a in b\n");
  EXPECT_EQ(Apply("for i in xs:\n    pass\n", SiteKind::kLoop, Op::kRIL),
            "for i in reversed(xs):\n    pass\n");
  EXPECT_EQ(Apply("for i in 1, 2:\n    pass\n", SiteKind::kLoop, Op::kRIL),
            "for i in reversed((1, 2)):\n    pass\n");
  EXPECT_EQ(Apply("y = -x\n", SiteKind::kUnaryArithmetic, Op::kAOD),
            "y = x\n");
}

TEST(ApplyOperatorTest, ReplacementPoolsExcludeOriginal) {
  Program p = Program::Parse("r = x < y\n");
  CandidateSite site = SiteOf(p, SiteKind::kRelational);
  EXPECT_THROW(ApplyReplacement(p, site, Op::kROR, "<"), Error);
  EXPECT_THROW(ApplyReplacement(p, site, Op::kROR, "+"), Error);
  EXPECT_THROW(ApplyReplacement(p, site, Op::kAOR, "+"), Error);
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    std::string out = ApplyOperator(p, site, Op::kROR, rng).source();
    seen.insert(out.substr(6, out.size() - 9));
  }
  EXPECT_EQ(seen, (std::set<std::string>{"<=", ">", ">=", "==", "!="}));
}

TEST(ApplyOperatorTest, AugmentedAssignPool) {
  Program p = Program::Parse("x = 1\nx += 2\n");
  CandidateSite site = SiteOf(p, SiteKind::kAugmentedAssign);
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Rng rng(seed);
    std::string out = ApplyOperator(p, site, Op::kASR, rng).source();
    seen.insert(out.substr(8, out.find(' ', 8) - 8));
  }
  EXPECT_EQ(seen,
            (std::set<std::string>{"-=", "*=", "/=", "//=", "%=", "**="}));
}

TEST(ApplyOperatorTest, SliceIndexRemovalOutcomes) {
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    seen.insert(Apply("b = a[1:5:2]\n", SiteKind::kSlice, Op::kSIR, seed));
  }
  EXPECT_EQ(seen, (std::set<std::string>{"b = a[:5:2]\n", "b = a[1::2]\n",
                                         "b = a[1:5]\n"}));
  EXPECT_EQ(Apply("b = a[1:]\n", SiteKind::kSlice, Op::kSIR), "b = a[:]\n");
}

TEST(ApplyOperatorTest, LoopInsertions) {
  EXPECT_EQ(Apply("for i in x:\n    a = i\n    b = i\nc = 1\n",
                  SiteKind::kLoop, Op::kOIL),
            "for i in x:\n    a = i\n    b = i\n    break\nc = 1\n");
  EXPECT_EQ(Apply("while t:\n    a = 1\n", SiteKind::kLoop, Op::kZIL),
            "while t:\n    break\n    a = 1\n");
  EXPECT_EQ(Apply("while t: a = 1\n", SiteKind::kLoop, Op::kOIL),
            "while t: a = 1; break\n");
  EXPECT_EQ(Apply("while t: a = 1\n", SiteKind::kLoop, Op::kZIL),
            "while t: break; a = 1\n");
  EXPECT_THROW(Apply("while t:\n    pass\n", SiteKind::kLoop, Op::kRIL), Error);
}

TEST(ApplyOperatorTest, Involutions) {
  for (const char* source : {"for i in x:\n    break\n",
                             "for i in x:\n    continue\n"}) {
    Program p = Program::Parse(source);
    Rng rng(3);
    Program once = ApplyOperator(p, SiteOf(p, SiteKind::kBreakContinue),
                                 Op::kBCR, rng);
    Program twice = ApplyOperator(
        once, SiteOf(once, SiteKind::kBreakContinue), Op::kBCR, rng);
    EXPECT_NE(once.source(), source);
    EXPECT_EQ(twice.source(), source);
  }
  Program p = Program::Parse("r = a and b\n");
  Rng rng(3);
  Program once =
      ApplyOperator(p, SiteOf(p, SiteKind::kLogicalConnector), Op::kLCR, rng);
  EXPECT_EQ(ApplyOperator(once, SiteOf(once, SiteKind::kLogicalConnector),
                          Op::kLCR, rng)
                .source(),
            p.source());
}

TEST(ApplyOperatorTest, InapplicableOperator) {
  Program p = Program::Parse("x = 1 + 2\n");
  Rng rng(0);
  try {
    ApplyOperator(p, SiteOf(p, SiteKind::kNumericLiteral), Op::kROR, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInapplicableOperator);
  }
}

// The integer offsets are rounded draws from N(0, 100), never zero.
TEST(ConstantReplacementTest, IntegerOffsetsFollowTheGaussian) {
  Program p = Program::Parse("x = 1000\n");
  CandidateSite site = SiteOf(p, SiteKind::kNumericLiteral);
  const int kDraws = 4000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int seed = 0; seed < kDraws; ++seed) {
    Rng rng(seed);
    auto [mutant, record] = ApplyOperatorRecorded(p, site, Op::kCRP, rng);
    std::string after = record.after;
    if (after.front() == '(') after = after.substr(1, after.size() - 2);
    long long value = std::stoll(after);
    ASSERT_NE(value, 1000);
    double offset = static_cast<double>(value - 1000);
    sum += offset;
    sum_sq += offset * offset;
  }
  double mean = sum / kDraws;
  double sd = std::sqrt(sum_sq / kDraws - mean * mean);
  // Standard error of the mean is 100 / sqrt(4000) ~ 1.6.
  EXPECT_NEAR(mean, 0.0, 8.0);
  EXPECT_NEAR(sd, 100.0, 6.0);
}

TEST(ConstantReplacementTest, KindsArePreserved) {
  for (int seed = 0; seed < 50; ++seed) {
    std::string f = Apply("x = 2.5\n", SiteKind::kNumericLiteral, Op::kCRP, seed);
    EXPECT_NE(f.find('.') == std::string::npos && f.find('e') == std::string::npos,
              true)
        << f;
    std::string i = Apply("x = 7\n", SiteKind::kNumericLiteral, Op::kCRP, seed);
    EXPECT_EQ(i.find('.'), std::string::npos) << i;
  }
}

TEST(ConstantReplacementTest, StringsExtendOrShorten) {
  int extended = 0;
  int shortened = 0;
  for (int seed = 0; seed < 400; ++seed) {
    std::string out =
        Apply("s = 'abc'\n", SiteKind::kStringLiteral, Op::kCRP, seed);
    std::string value = out.substr(5, out.size() - 7);
    if (value == "ab") {
      ++shortened;
    } else {
      ASSERT_TRUE(value.size() == 4 || value.size() == 5) << value;
      ASSERT_EQ(value.substr(0, 3), "abc");
      ++extended;
    }
  }
  EXPECT_NEAR(extended / 400.0, 0.5, 0.1);
  EXPECT_GT(shortened, 0);
  for (int seed = 0; seed < 20; ++seed) {
    std::string out = Apply("s = ''\n", SiteKind::kStringLiteral, Op::kCRP, seed);
    EXPECT_GT(out.size(), std::string("s = ''\n").size());
  }
}

TEST(GenerateMutantsTest, NoCandidatesNoMutants) {
  EXPECT_TRUE(GenerateMutants(Program::Parse("pass\n"), 20, 1).empty());
  EXPECT_TRUE(MutateConstantsOnly(Program::Parse("x = 'a'\n"), 20, 1).empty());
}

TEST(GenerateMutantsTest, DeterministicDistinctAndLocal) {
  Program seed = Program::Parse(
      "n = 10\ntotal = 0\nfor i in range(n):\n    if i % 2 == 0 and i > 2:\n"
      "        total += i * 3\n    elif not i:\n        continue\n"
      "print(total, 'done'[1:])\n",
      "s", "p");
  std::vector<Mutant> a = GenerateMutants(seed, 20, 42);
  std::vector<Mutant> b = GenerateMutants(seed, 20, 42);
  ASSERT_EQ(a.size(), b.size());
  ASSERT_FALSE(a.empty());
  EXPECT_LE(a.size(), 20u);
  std::set<std::string> sources = {seed.source()};
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].program.source(), b[i].program.source());
    EXPECT_EQ(a[i].applied, b[i].applied);
    EXPECT_TRUE(sources.insert(a[i].program.source()).second);
    EXPECT_EQ(a[i].parent_id, "s");
    EXPECT_EQ(a[i].program.problem_id(), "p");
    EXPECT_EQ(a[i].program.origin(), Origin::kMutant);
    EXPECT_EQ(a[i].program.id().rfind("s.m", 0), 0u);
    std::string why;
    EXPECT_TRUE(testing::MatchesRecords(seed.source(), a[i], &why))
        << why << "\n" << a[i].program.source();
  }
  EXPECT_NE(GenerateMutants(seed, 20, 43)[0].program.source(),
            a[0].program.source());
}

TEST(GenerateMutantsTest, ConstantsOnlyTouchesNumericLiterals) {
  Program seed = Program::Parse("squares = [x**2 for x in range(10)]\n");
  std::vector<Mutant> mutants = MutateConstantsOnly(seed, 20, 5);
  ASSERT_FALSE(mutants.empty());
  for (const Mutant& m : mutants) {
    for (const MutationRecord& r : m.applied) {
      EXPECT_EQ(r.op, Op::kCRP);
      EXPECT_TRUE(r.before == "2" || r.before == "10");
    }
    EXPECT_TRUE(testing::MatchesRecords(seed.source(), m));
  }
}

// Every mutant of the seed corpus is also accepted by CPython's compiler.
TEST(GenerateMutantsTest, MutantsCompileUnderCPython) {
  std::vector<std::string> sources;
  for (const ProgramEntry& entry :
       LoadSeedDir(testing::FixtureDir() / "seeds")) {
    Program seed = RewriteStdin(entry.program, entry.input);
    for (const Mutant& m : GenerateMutants(seed, 20, 7)) {
      sources.push_back(m.program.source());
    }
  }
  ASSERT_GT(sources.size(), 200u);
  std::vector<bool> compiles = testing::PythonCompiles(sources);
  for (std::size_t i = 0; i < sources.size(); ++i) {
    EXPECT_TRUE(compiles[i]) << sources[i];
  }
}

TEST(ApplyEditsTest, OrdersByOffsetThenPriority) {
  std::string out = ApplyEdits(
      "abcdef", {SourceEdit{Span{2, 4}, "X", kReplacePriority},
                 SourceEdit{Span{2, 2}, "<", 1000},
                 SourceEdit{Span{6, 6}, "!", 0},
                 SourceEdit{Span{6, 6}, "?", -1}});
  EXPECT_EQ(out, "ab<Xef?!");
  EXPECT_THROW(ApplyEdits("abc", {SourceEdit{Span{0, 2}, "", kReplacePriority},
                                  SourceEdit{Span{1, 3}, "", kReplacePriority}}),
               Error);
}

}  // namespace
}  // namespace cexec
