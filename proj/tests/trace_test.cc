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

#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cexec/error.h"
#include "cexec/program.h"
#include "cexec/trace.h"

namespace cexec {
namespace {

TraceLine L(int line_no, StateMap state) { return TraceLine{line_no, state}; }

TEST(EncodeTraceTest, Examples) {
  EXPECT_EQ(EncodeTrace(Trace{{L(1, {{"x", "1"}})}}),
            "[LINE] [1] [STATE] x : 1 [STATEEND]");
  EXPECT_EQ(EncodeTrace(Trace{}), "");
  EXPECT_EQ(EncodeTrace(Trace{{L(1, {{"x", "1"}}), L(2, {{"x", "1"}, {"y", "2"}})}}),
            "[LINE] [1] [STATE] x : 1 [STATEEND] "
            "[LINE] [2] [STATE] x : 1 [DICTSEP] y : 2 [STATEEND]");
  EXPECT_EQ(EncodeTrace(Trace{{L(3, {})}}), "[LINE] [3] [STATE] [STATEEND]");
  EXPECT_THROW(EncodeTrace(Trace{{L(201, {})}}), Error);
  EXPECT_THROW(EncodeTrace(Trace{{L(0, {})}}), Error);
}

TEST(EncodeTraceTest, SingleLineTarget) {
  Trace five;
  for (int i = 1; i <= 5; ++i) {
    five.lines.push_back(L(i, {{"i", std::to_string(i)}}));
  }
  EXPECT_EQ(EncodeSingleLineTarget(five), EncodeTraceLine(five.lines.back()));
  Trace one{{L(1, {{"x", "3"}, {"y", "2"}})}};
  EXPECT_EQ(EncodeSingleLineTarget(one), EncodeTrace(one));
  try {
    EncodeSingleLineTarget(Trace{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyTrace);
  }
}

TEST(DecodeTraceTest, Examples) {
  DecodedTrace missing_end = DecodeTrace("[LINE] [1] [STATE] x : 1");
  EXPECT_TRUE(missing_end.malformed);
  EXPECT_TRUE(missing_end.trace.lines.empty());

  DecodedTrace quoted = DecodeTrace("[LINE] [2] [STATE] y : 'ab' [STATEEND]");
  EXPECT_FALSE(quoted.malformed);
  EXPECT_EQ(quoted.trace.lines, (std::vector<TraceLine>{L(2, {{"y", "'ab'"}})}));

  DecodedTrace empty = DecodeTrace("");
  EXPECT_FALSE(empty.malformed);
  EXPECT_TRUE(empty.trace.lines.empty());
}

TEST(DecodeTraceTest, LongestPrefix) {
  std::string good = "[LINE] [1] [STATE] x : 1 [STATEEND] ";
  for (const char* tail :
       {"[LINE] [2] [STATE] x 1 [STATEEND]", "[LINE] [2]", "garbage",
        "[LINE] [201] [STATE] [STATEEND]", "[LINE] [2] [STATE] x : 1 [DICTSEP] "
                                           "x : 2 [STATEEND]",
        "[LINE] [2] [STATE] 9x : 1 [STATEEND]", "[LINE] [02] [STATE] [STATEEND]",
        "[LINE] [2] [STATE] s : 'open [STATEEND]"}) {
    DecodedTrace d = DecodeTrace(good + tail);
    EXPECT_TRUE(d.malformed) << tail;
    EXPECT_EQ(d.trace.lines, (std::vector<TraceLine>{L(1, {{"x", "1"}})}))
        << tail;
  }
}

TEST(DecodeTraceTest, StructureTokensInsideQuotes) {
  Trace t{{L(1, {{"s", "'a [STATEEND] b'"}, {"t", "\"[DICTSEP] [LINE]\""}}),
           L(2, {{"u", "['x [STATE]', 'it\\'s']"}})}};
  DecodedTrace d = DecodeTrace(EncodeTrace(t));
  EXPECT_FALSE(d.malformed);
  EXPECT_EQ(d.trace.lines, t.lines);
}

// Values shaped like Python reprs, including strings that embed structure
// tokens and separators.
std::string RandomValue(std::mt19937_64& rng, int depth = 0) {
  static const std::vector<std::string> kFragments = {
      "a", "b c", "[STATEEND]", "[DICTSEP]", " : ", "[LINE] [3]", "x", "  ",
      "\\n", "{", "]"};
  std::uniform_int_distribution<int> kind(0, depth > 1 ? 3 : 5);
  switch (kind(rng)) {
    case 0:
      return std::to_string(static_cast<int>(rng() % 2001) - 1000);
    case 1: {
      std::ostringstream out;
      out << (static_cast<double>(rng() % 100000) / 100.0);
      return out.str();
    }
    case 2:
      return rng() % 2 ? "True" : "None";
    case 3: {
      std::string s;
      int n = static_cast<int>(rng() % 4);
      for (int i = 0; i < n; ++i) {
        s += kFragments[rng() % kFragments.size()];
      }
      return rng() % 2 ? "'" + s + "'" : "\"" + s + "'\"";
    }
    case 4: {
      std::string s = "[";
      int n = static_cast<int>(rng() % 4);
      for (int i = 0; i < n; ++i) {
        s += (i ? ", " : "") + RandomValue(rng, depth + 1);
      }
      return s + "]";
    }
    default: {
      std::string s = "{";
      int n = static_cast<int>(rng() % 3);
      for (int i = 0; i < n; ++i) {
        s += (i ? ", " : "") + RandomValue(rng, 2) + ": " +
             RandomValue(rng, depth + 1);
      }
      return s + "}";
    }
  }
}

Trace RandomTrace(std::mt19937_64& rng) {
  static const std::vector<std::string> kNames = {"x", "y", "total", "_i",
                                                  "arr2", "s", "LINE", "k"};
  Trace t;
  int n = static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) {
    TraceLine line;
    line.line_no = 1 + static_cast<int>(rng() % kMaxProgramLines);
    std::vector<std::string> names = kNames;
    std::shuffle(names.begin(), names.end(), rng);
    names.resize(rng() % 5);
    for (const std::string& name : names) {
      line.state.emplace_back(name, RandomValue(rng));
    }
    t.lines.push_back(line);
  }
  return t;
}

TEST(DecodeTraceTest, RoundTripRandomTraces) {
  std::mt19937_64 rng(20261018);
  for (int i = 0; i < 1000; ++i) {
    Trace t = RandomTrace(rng);
    std::string text = EncodeTrace(t);
    DecodedTrace d = DecodeTrace(text);
    ASSERT_FALSE(d.malformed) << text;
    ASSERT_EQ(d.trace.lines, t.lines) << text;
    // Any strict prefix that cuts a group short drops exactly that group.
    if (!t.lines.empty()) {
      std::string cut = text.substr(0, text.size() - 1);
      DecodedTrace p = DecodeTrace(cut);
      EXPECT_TRUE(p.malformed);
      EXPECT_EQ(p.trace.lines.size(), t.lines.size() - 1);
    }
  }
}

TEST(VocabularyTest, TwoHundredTenTokens) {
  const std::vector<std::string>& vocab = SpecialVocabulary();
  EXPECT_EQ(vocab.size(), 210u);
  std::set<std::string> unique(vocab.begin(), vocab.end());
  EXPECT_EQ(unique.size(), 210u);
  for (int i = 1; i <= 200; ++i) {
    EXPECT_TRUE(unique.count("[" + std::to_string(i) + "]"));
  }
  for (const char* t : {"[SINGLELINE]", "[TUTORIAL]", "[CODENETMUT]", "[LINE]",
                        "[STATE]", "[DICTSEP]", "[STATEEND]", "[INDENT]",
                        "[DEDENT]", "[E2D]"}) {
    EXPECT_TRUE(unique.count(t)) << t;
  }
  EXPECT_EQ(TierFromName("tutorial"), TierPrefix::kTutorial);
  EXPECT_EQ(TierFromName("[CODENETMUT]"), TierPrefix::kCodeNetMut);
}

TEST(EncodeCodeTest, Examples) {
  EXPECT_EQ(EncodeCode(Program::Parse("x = 1"), TierPrefix::kCodeNetMut),
            "[CODENETMUT] [1] x = 1");
  EXPECT_EQ(EncodeCode(Program::Parse("for i in a:\n    b = i"),
                       TierPrefix::kTutorial),
            "[TUTORIAL] [1] for i in a: [2] [INDENT] b = i");
  EXPECT_EQ(EncodeCode(Program::Parse("if a:\n  if b:\n    c = 1\nd = 2\n"),
                       TierPrefix::kSingleLine),
            "[SINGLELINE] [1] if a: [2] [INDENT] if b: [3] [INDENT] c = 1 "
            "[4] [DEDENT] [DEDENT] d = 2");
}

TEST(EncodeCodeTest, ContinuationAndBlankLinesKeepLevel) {
  EXPECT_EQ(EncodeCode(Program::Parse("if a:\n    x = (1,\n  2)\n\n    y = 3\n"),
                       TierPrefix::kCodeNetMut),
            "[CODENETMUT] [1] if a: [2] [INDENT] x = (1, [3] 2) [4] [5] y = 3");
}

// Indent levels recomputed from leading whitespace with an explicit stack.
std::vector<int> IndentLevels(const std::string& source) {
  std::vector<int> levels;
  std::vector<int> stack = {0};
  std::istringstream in(source);
  std::string line;
  while (std::getline(in, line)) {
    int width = static_cast<int>(line.find_first_not_of(' '));
    while (width < stack.back()) stack.pop_back();
    if (width > stack.back()) stack.push_back(width);
    levels.push_back(static_cast<int>(stack.size()) - 1);
  }
  return levels;
}

TEST(EncodeCodeTest, IndentTokensMatchLevelDeltas) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::string source;
    int depth = 0;
    int n = 1 + static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      std::string pad(4 * depth, ' ');
      if (i + 1 < n && depth < 5 && rng() % 3 == 0) {
        source += pad + "if x" + std::to_string(i) + ":\n";
        ++depth;
        continue;
      }
      source += pad + "v = " + std::to_string(i) + "\n";
      if (depth > 0 && rng() % 2 == 0) {
        depth -= 1 + static_cast<int>(rng() % depth);
      }
    }
    std::vector<int> levels = IndentLevels(source);
    std::string expected = "[CODENETMUT]";
    int previous = 0;
    std::istringstream in(source);
    std::string text;
    for (std::size_t i = 0; i < levels.size(); ++i) {
      std::getline(in, text);
      expected += " [" + std::to_string(i + 1) + "]";
      for (int d = previous; d < levels[i]; ++d) expected += " [INDENT]";
      for (int d = levels[i]; d < previous; ++d) expected += " [DEDENT]";
      expected += " " + text.substr(text.find_first_not_of(' '));
      previous = levels[i];
    }
    EXPECT_EQ(EncodeCode(Program::Parse(source), TierPrefix::kCodeNetMut),
              expected)
        << source;
  }
}

TEST(EncodeCodeTest, LineBudgetBoundary) {
  std::string source;
  for (int i = 0; i < 200; ++i) source += "x = " + std::to_string(i) + "\n";
  std::string encoded = EncodeCode(Program::Parse(source), TierPrefix::kCodeNetMut);
  EXPECT_NE(encoded.find("[200] x = 199"), std::string::npos);
  try {
    Program::Parse(source + "x = 200\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTooManyLines);
  }
}

}  // namespace
}  // namespace cexec
