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

#include <atomic>
#include <chrono>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cexec/error.h"
#include "cexec/harness.h"
#include "cexec/io.h"
#include "cexec/mutation.h"
#include "cexec/program.h"
#include "test_util.h"

namespace cexec {
namespace {

using testing::FakeHarness;
using testing::StubHarness;

ExecutionResult RunSource(const HarnessConfig& config, const std::string& source,
                    const std::string& input = "") {
  return Execute(config, Program::Parse(source), TestInput::FromText(input));
}

TEST(ExecuteTest, Examples) {
  ExecutionResult ok = RunSource(StubHarness(), "x = 1\n");
  EXPECT_EQ(ok.status, ExecutionStatus::kOk);
  ASSERT_EQ(ok.trace.lines.size(), 1u);
  EXPECT_EQ(ok.trace.lines[0], (TraceLine{1, {{"x", "1"}}}));
  EXPECT_EQ(ok.stdout_text, "");

  EXPECT_EQ(RunSource(StubHarness(), "x = 1/0\n").status,
            ExecutionStatus::kRuntimeError);

  ExecutionResult spin = RunSource(StubHarness(), "while True:\n    pass\n");
  EXPECT_TRUE(spin.status == ExecutionStatus::kTimeout ||
              spin.status == ExecutionStatus::kTraceLimitExceeded);
}

TEST(ExecuteTest, TraceCarriesStatusAndStdout) {
  ExecutionResult r =
      RunSource(StubHarness(), "a = input()\nb = a * 2\nprint(b)\n", "xy\n");
  EXPECT_EQ(r.status, ExecutionStatus::kOk);
  EXPECT_EQ(r.stdout_text, "xyxy\n");
  EXPECT_EQ(r.trace.stdout_text, r.stdout_text);
  EXPECT_EQ(r.trace.status, r.status);
  ASSERT_EQ(r.trace.lines.size(), 3u);
  EXPECT_EQ(r.trace.lines[1], (TraceLine{2, {{"a", "'xy'"}, {"b", "'xyxy'"}}}));
}

TEST(ExecuteTest, TimeLimitBoundsWallClock) {
  HarnessConfig config = StubHarness();
  config.limits.time_s = 0.5;
  auto start = std::chrono::steady_clock::now();
  ExecutionResult r = Execute(
      config,
      Program::Parse(testing::Slurp(testing::FixtureDir() / "limits" /
                                    "slow_line.py")),
      TestInput{});
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  EXPECT_EQ(r.status, ExecutionStatus::kTimeout);
  EXPECT_LE(elapsed, config.limits.time_s + 2.0);
  EXPECT_LE(r.trace.lines.size(), static_cast<std::size_t>(kMaxTraceLines));
}

TEST(ExecuteTest, TraceLimitTruncatesExactly) {
  ExecutionResult r = Execute(
      StubHarness(),
      Program::Parse(testing::Slurp(testing::FixtureDir() / "limits" /
                                    "nonterminating.py")),
      TestInput{});
  EXPECT_EQ(r.status, ExecutionStatus::kTraceLimitExceeded);
  EXPECT_EQ(r.trace.lines.size(), static_cast<std::size_t>(kMaxTraceLines));

  HarnessConfig small = StubHarness();
  small.limits.max_trace_lines = 10;
  ExecutionResult s = Execute(
      small,
      Program::Parse(testing::Slurp(testing::FixtureDir() / "limits" /
                                    "loop2000.py")),
      TestInput{});
  EXPECT_EQ(s.status, ExecutionStatus::kTraceLimitExceeded);
  EXPECT_EQ(s.trace.lines.size(), 10u);

  // A trace of exactly the budget is not over it.
  HarnessConfig exact = StubHarness();
  exact.limits.max_trace_lines = 3;
  EXPECT_EQ(Execute(exact, Program::Parse("a = 1\nb = 2\nc = 3\n"), TestInput{})
                .status,
            ExecutionStatus::kOk);
}

TEST(ExecuteTest, FloodingHookIsCutAtTheBudget) {
  ExecutionResult r = RunSource(FakeHarness("flood.py"), "x = 1\n");
  EXPECT_EQ(r.status, ExecutionStatus::kTraceLimitExceeded);
  EXPECT_EQ(r.trace.lines.size(), static_cast<std::size_t>(kMaxTraceLines));
}

TEST(ExecuteTest, InterchangeProtocol) {
  ExecutionResult canned = RunSource(FakeHarness("canned.py"), "x = 1\n");
  EXPECT_EQ(canned.status, ExecutionStatus::kOk);
  EXPECT_EQ(canned.stdout_text, "from hook\n");
  EXPECT_EQ(canned.trace.lines,
            (std::vector<TraceLine>{TraceLine{1, {{"x", "1"}}},
                                    TraceLine{2, {{"x", "1"}, {"s", "'a b'"}}}}));

  EXPECT_EQ(RunSource(FakeHarness("runtime_error.py"), "x = 1\n").status,
            ExecutionStatus::kRuntimeError);

  for (const char* hook : {"no_summary.py", "bad_json.py", "missing.py"}) {
    try {
      RunSource(FakeHarness(hook), "x = 1\n");
      ADD_FAILURE() << hook;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kHarnessFailure) << hook;
    }
  }
  HarnessConfig no_python = StubHarness();
  no_python.python = "/nonexistent/python3";
  EXPECT_THROW(RunSource(no_python, "x = 1\n"), Error);
}

TEST(ExecuteTest, EnvironmentAndSandbox) {
  ExecutionResult r = RunSource(FakeHarness("echo_env.py"), "x = 1\n", "a\nb\n");
  ASSERT_EQ(r.trace.lines.size(), 1u);
  StateMap expected = {{"hashseed", "'0'"},
                       {"budget", "'1024'"},
                       {"stdin", "'a\\nb\\n'"},
                       {"program", "'program.py'"},
                       {"cwd_has_program", "True"}};
  EXPECT_EQ(r.trace.lines[0].state, expected);
}

TEST(ExecuteTest, DeterministicAcrossRuns) {
  const std::string source =
      "s = {'apple', 'pear', 'fig', 'kiwi'}\nd = {}\nfor w in s:\n"
      "    d[w] = len(w)\nprint(list(s), d)\n";
  ExecutionResult a = RunSource(StubHarness(), source);
  ExecutionResult b = RunSource(StubHarness(), source);
  EXPECT_EQ(a.status, ExecutionStatus::kOk);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.stdout_text, b.stdout_text);
}

// The harness stdout matches an untraced run of the same program.
TEST(ExecuteTest, StdoutMatchesPlainRun) {
  testing::ScratchDir dir;
  int compared = 0;
  for (const ProgramEntry& entry :
       LoadSeedDir(testing::FixtureDir() / "seeds")) {
    ExecutionResult traced = Execute(StubHarness(), entry.program, entry.input);
    if (traced.status != ExecutionStatus::kOk) continue;
    WriteTextFile(dir / "p.py", entry.program.source());
    WriteTextFile(dir / "in.txt", entry.input.ToText());
    testing::CommandResult plain =
        testing::RunCommand("PYTHONHASHSEED=0 python3 " + testing::Quote(dir / "p.py") +
                            " < " + testing::Quote(dir / "in.txt"));
    ASSERT_EQ(plain.exit_code, 0) << entry.program.id();
    EXPECT_EQ(traced.stdout_text, plain.out) << entry.program.id();
    ++compared;
  }
  EXPECT_GE(compared, 15);
}

TEST(FilterExecutableTest, KeepsOkMutantsInOrder) {
  Program ok = Program::Parse("x = 1\n", "ok", "p");
  Program bad = Program::Parse("x = 1/0\n", "bad", "p");
  std::vector<Mutant> mutants = {Mutant{ok, "s", {}}, Mutant{bad, "s", {}},
                                 Mutant{ok, "s", {}}};
  std::vector<ExecutedMutant> kept =
      FilterExecutable(StubHarness(), mutants, TestInput{});
  ASSERT_EQ(kept.size(), 2u);
  EXPECT_EQ(kept[0].mutant.program.id(), "ok");
  EXPECT_EQ(kept[0].trace.lines.size(), 1u);
  EXPECT_TRUE(FilterExecutable(StubHarness(), {}, TestInput{}).empty());
}

TEST(FilterExecutableTest, LoopHeavyMutantsRespectTheBudget) {
  Program seed = Program::Parse(
      testing::Slurp(testing::FixtureDir() / "limits" / "loop2000.py"), "l", "l");
  std::vector<Mutant> mutants = GenerateMutants(seed, 20, 11);
  ASSERT_FALSE(mutants.empty());
  for (const ExecutedMutant& e :
       FilterExecutable(StubHarness(), mutants, TestInput{})) {
    EXPECT_LE(e.trace.lines.size(), static_cast<std::size_t>(kMaxTraceLines));
    EXPECT_EQ(e.trace.status, ExecutionStatus::kOk);
  }
}

TEST(ParallelForTest, RunsEveryIndexAndRethrows) {
  std::vector<std::atomic<int>> hits(100);
  ParallelFor(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_THROW(ParallelFor(10, 3,
                           [](std::size_t i) {
                             if (i == 7) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

}  // namespace
}  // namespace cexec
